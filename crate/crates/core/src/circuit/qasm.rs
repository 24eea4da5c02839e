//! Reader and writer for the OpenQASM 2 subset the tools exchange.
//!
//! Accepted: an optional `OPENQASM 2.0;` header, the `qelib1.inc` include,
//! exactly one `qreg` and at most one `creg`, the gates `x sx rz h s sdg t
//! tdg cx ccx cp swap`, `measure q[i] -> c[j];` and `barrier`. Angle
//! arguments are arithmetic over decimal literals and `pi`. `//` starts a
//! comment.

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Angle, Circuit, CircuitError, Gate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown gate `{name}`")]
    UnknownGate { line: usize, col: usize, name: String },
    #[error("{line}:{col}: index {index} out of range for register `{reg}` of size {size}")]
    IndexOutOfRange {
        line: usize,
        col: usize,
        reg: String,
        index: usize,
        size: usize,
    },
    #[error("{line}:{col}: clbit {clbit} is already written by an earlier measurement")]
    DuplicateClbit { line: usize, col: usize, clbit: usize },
    #[error("{line}:{col}: {source}")]
    Invalid {
        line: usize,
        col: usize,
        source: CircuitError,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Arrow,
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> QasmError {
    QasmError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let src = match raw.find("//") {
            Some(p) => &raw[..p],
            None => raw,
        };
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Ident(word), line, col });
            } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| syntax(line, col, format!("bad number `{text}`")))?;
                out.push(Token { tok: Tok::Num(v), line, col });
            } else if c == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(syntax(line, col, "unterminated string"));
                }
                let s: String = chars[start..i].iter().collect();
                i += 1;
                out.push(Token { tok: Tok::Str(s), line, col });
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, line, col });
                i += 2;
            } else if "[](),;*/+-".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line, col });
                i += 1;
            } else {
                return Err(syntax(line, col, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.eof, |t| (t.line, t.col))
    }

    fn next(&mut self) -> Result<Token, QasmError> {
        let (l, c) = self.here();
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(l, c, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat_sym(&mut self, ch: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(c), .. }) if *c == ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, ch: char) -> Result<(), QasmError> {
        let (l, c) = self.here();
        if self.eat_sym(ch) {
            Ok(())
        } else {
            Err(syntax(l, c, format!("expected `{ch}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), QasmError> {
        let t = self.next()?;
        match t.tok {
            Tok::Ident(s) => Ok((s, t.line, t.col)),
            _ => Err(syntax(t.line, t.col, "expected identifier")),
        }
    }

    fn integer(&mut self) -> Result<usize, QasmError> {
        let t = self.next()?;
        match t.tok {
            Tok::Num(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            _ => Err(syntax(t.line, t.col, "expected non-negative integer")),
        }
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym('*') {
                v *= self.unary()?;
            } else if self.eat_sym('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym('-') {
            return Ok(-self.unary()?);
        }
        let t = self.next()?;
        match t.tok {
            Tok::Num(v) => Ok(v),
            Tok::Ident(ref s) if s == "pi" => Ok(PI),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            _ => Err(syntax(t.line, t.col, "expected angle expression")),
        }
    }
}

struct Reg {
    name: String,
    size: usize,
}

/// Parse program text into a [`Circuit`] over the source gate set.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let toks = tokenize(text)?;
    let eof = (text.lines().count().max(1), 1);
    let mut p = Parser { toks, pos: 0, eof };
    let mut qreg: Option<Reg> = None;
    let mut creg: Option<Reg> = None;
    let mut gates: Vec<(Gate, usize, usize)> = Vec::new();
    let mut written: Vec<bool> = Vec::new();

    while p.peek().is_some() {
        let (word, line, col) = p.ident()?;
        match word.as_str() {
            "OPENQASM" => {
                let t = p.next()?;
                if !matches!(t.tok, Tok::Num(_)) {
                    return Err(syntax(t.line, t.col, "expected version number"));
                }
            }
            "include" => {
                let t = p.next()?;
                match t.tok {
                    Tok::Str(ref s) if s == "qelib1.inc" => {}
                    _ => return Err(syntax(t.line, t.col, "only `include \"qelib1.inc\";` is supported")),
                }
            }
            "qreg" | "creg" => {
                let (name, _, _) = p.ident()?;
                p.expect_sym('[')?;
                let size = p.integer()?;
                p.expect_sym(']')?;
                let slot = if word == "qreg" { &mut qreg } else { &mut creg };
                if slot.is_some() {
                    return Err(syntax(line, col, format!("only one `{word}` declaration is allowed")));
                }
                if word == "creg" {
                    written = vec![false; size];
                }
                *slot = Some(Reg { name, size });
            }
            _ => {
                let gate = parse_gate(&mut p, &word, line, col, qreg.as_ref(), creg.as_ref())?;
                if let Gate::Measure { clbit, .. } = gate {
                    if written[clbit] {
                        return Err(QasmError::DuplicateClbit { line, col, clbit });
                    }
                    written[clbit] = true;
                }
                gates.push((gate, line, col));
            }
        }
        p.expect_sym(';')?;
    }

    let qreg = qreg.ok_or_else(|| syntax(eof.0, 1, "missing `qreg` declaration"))?;
    let num_clbits = creg.map_or(0, |r| r.size);
    let mut circuit = Circuit::new(qreg.size, num_clbits);
    let positions: Vec<(usize, usize)> = gates.iter().map(|(_, l, c)| (*l, *c)).collect();
    for (g, _, _) in gates {
        circuit.push(g);
    }
    circuit.validate(false).map_err(|e| {
        let index = match e {
            CircuitError::QubitOutOfRange { index, .. }
            | CircuitError::ClbitOutOfRange { index, .. }
            | CircuitError::RepeatedOperand { index, .. }
            | CircuitError::DuplicateClbit { index, .. }
            | CircuitError::UseAfterMeasure { index, .. }
            | CircuitError::NotBasis { index, .. } => index,
        };
        let (line, col) = positions.get(index).copied().unwrap_or(eof);
        QasmError::Invalid { line, col, source: e }
    })?;
    Ok(circuit)
}

fn operand(p: &mut Parser, reg: Option<&Reg>, kind: &str) -> Result<usize, QasmError> {
    let (name, line, col) = p.ident()?;
    let reg = reg.ok_or_else(|| syntax(line, col, format!("`{name}` used before its {kind} declaration")))?;
    if name != reg.name {
        return Err(syntax(line, col, format!("unknown register `{name}`")));
    }
    p.expect_sym('[')?;
    let index = p.integer()?;
    p.expect_sym(']')?;
    if index >= reg.size {
        return Err(QasmError::IndexOutOfRange {
            line,
            col,
            reg: name,
            index,
            size: reg.size,
        });
    }
    Ok(index)
}

fn parse_gate(
    p: &mut Parser,
    name: &str,
    line: usize,
    col: usize,
    qreg: Option<&Reg>,
    creg: Option<&Reg>,
) -> Result<Gate, QasmError> {
    let (n_params, n_qubits) = match name {
        "x" | "sx" | "h" | "s" | "sdg" | "t" | "tdg" => (0, 1),
        "rz" => (1, 1),
        "cx" | "swap" => (0, 2),
        "cp" => (1, 2),
        "ccx" => (0, 3),
        "measure" => {
            let qubit = operand(p, qreg, "qreg")?;
            let (l, c) = p.here();
            if !matches!(p.next()?.tok, Tok::Arrow) {
                return Err(syntax(l, c, "expected `->`"));
            }
            let clbit = operand(p, creg, "creg")?;
            return Ok(Gate::Measure { qubit, clbit });
        }
        "barrier" => {
            // `barrier q;` covers the whole register.
            if let (Some(Token { tok: Tok::Ident(_), .. }), Some(Token { tok: Tok::Sym(';'), .. })) =
                (p.toks.get(p.pos), p.toks.get(p.pos + 1))
            {
                let (rname, l, c) = p.ident()?;
                let reg = qreg.ok_or_else(|| syntax(l, c, "barrier before qreg declaration"))?;
                if rname != reg.name {
                    return Err(syntax(l, c, format!("unknown register `{rname}`")));
                }
                return Ok(Gate::Barrier((0..reg.size).collect()));
            }
            let mut qs = vec![operand(p, qreg, "qreg")?];
            while p.eat_sym(',') {
                qs.push(operand(p, qreg, "qreg")?);
            }
            return Ok(Gate::Barrier(qs));
        }
        _ => {
            return Err(QasmError::UnknownGate {
                line,
                col,
                name: name.to_string(),
            })
        }
    };

    let mut params = Vec::new();
    if p.eat_sym('(') {
        params.push(p.expr()?);
        while p.eat_sym(',') {
            params.push(p.expr()?);
        }
        p.expect_sym(')')?;
    }
    if params.len() != n_params {
        return Err(syntax(
            line,
            col,
            format!("`{name}` takes {n_params} parameter(s), got {}", params.len()),
        ));
    }
    let angle = match params.first() {
        Some(&v) => Some(Angle::try_new(v).ok_or_else(|| syntax(line, col, "angle is not finite"))?),
        None => None,
    };
    let mut qs = vec![operand(p, qreg, "qreg")?];
    while p.eat_sym(',') {
        qs.push(operand(p, qreg, "qreg")?);
    }
    if qs.len() != n_qubits {
        return Err(syntax(
            line,
            col,
            format!("`{name}` takes {n_qubits} qubit(s), got {}", qs.len()),
        ));
    }
    Ok(match name {
        "x" => Gate::X(qs[0]),
        "sx" => Gate::SX(qs[0]),
        "h" => Gate::H(qs[0]),
        "s" => Gate::S(qs[0]),
        "sdg" => Gate::Sdg(qs[0]),
        "t" => Gate::T(qs[0]),
        "tdg" => Gate::Tdg(qs[0]),
        "rz" => Gate::RZ(qs[0], angle.unwrap()),
        "cx" => Gate::CX {
            control: qs[0],
            target: qs[1],
        },
        "swap" => Gate::Swap(qs[0], qs[1]),
        "cp" => Gate::CP {
            a: qs[0],
            b: qs[1],
            angle: angle.unwrap(),
        },
        "ccx" => Gate::CCX {
            c0: qs[0],
            c1: qs[1],
            target: qs[2],
        },
        _ => unreachable!(),
    })
}

const PI_DENOMINATORS: [u32; 13] = [1, 2, 4, 3, 6, 8, 12, 16, 32, 64, 128, 256, 1024];

/// Print an angle as an exact multiple of pi when the printed form parses
/// back to the identical value, otherwise with 17 significant digits.
pub fn format_angle(angle: Angle) -> String {
    let theta = angle.radians();
    if theta == 0.0 {
        return "0".to_string();
    }
    for &d in &PI_DENOMINATORS {
        let k = (theta * d as f64 / PI).round() as i64;
        if k <= 0 {
            continue;
        }
        let (text, value) = match (k, d) {
            (1, 1) => ("pi".to_string(), PI),
            (1, _) => (format!("pi/{d}"), PI / d as f64),
            (_, 1) => (format!("{k}*pi"), k as f64 * PI),
            _ => (format!("{k}*pi/{d}"), k as f64 * PI / d as f64),
        };
        if Angle::try_new(value).is_some_and(|a| a.radians().to_bits() == theta.to_bits()) {
            return text;
        }
    }
    format!("{theta:.16e}")
}

/// Deterministic program text for `c`.
pub fn emit_qasm(c: &Circuit) -> String {
    let mut s = String::new();
    s.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if !c.name.is_empty() {
        let _ = writeln!(s, "// {}", c.name.replace('\n', " "));
    }
    let _ = writeln!(s, "qreg q[{}];", c.num_qubits());
    let _ = writeln!(s, "creg c[{}];", c.num_clbits());
    for g in c.gates() {
        match *g {
            Gate::RZ(q, a) => {
                let _ = writeln!(s, "rz({}) q[{q}];", format_angle(a));
            }
            Gate::CP { a, b, angle } => {
                let _ = writeln!(s, "cp({}) q[{a}],q[{b}];", format_angle(angle));
            }
            Gate::Measure { qubit, clbit } => {
                let _ = writeln!(s, "measure q[{qubit}] -> c[{clbit}];");
            }
            Gate::Barrier(ref qs) if qs.is_empty() => {}
            _ => {
                let args: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
                let _ = writeln!(s, "{} {};", g.name(), args.join(","));
            }
        }
    }
    s
}
