use std::collections::HashMap;

use super::expr::Expr;
use super::lexer::{tokenize, Tok, Token};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
enum Builtin {
    OneQubit(&'static str, usize),
    Cx,
    Swap,
}

fn builtin(name: &str) -> Option<Builtin> {
    use Builtin::*;
    Some(match name {
        "u1" => OneQubit("u1", 1),
        "u2" => OneQubit("u2", 2),
        "u3" | "U" => OneQubit("u3", 3),
        "rx" => OneQubit("rx", 1),
        "ry" => OneQubit("ry", 1),
        "rz" => OneQubit("rz", 1),
        "h" => OneQubit("h", 0),
        "x" => OneQubit("x", 0),
        "y" => OneQubit("y", 0),
        "z" => OneQubit("z", 0),
        "s" => OneQubit("s", 0),
        "sdg" => OneQubit("sdg", 0),
        "t" => OneQubit("t", 0),
        "tdg" => OneQubit("tdg", 0),
        "id" => OneQubit("id", 0),
        "cx" | "CX" => Cx,
        "swap" => Swap,
        _ => return None,
    })
}

impl Builtin {
    fn arity(self) -> (usize, usize) {
        match self {
            Builtin::OneQubit(_, p) => (p, 1),
            Builtin::Cx | Builtin::Swap => (0, 2),
        }
    }
}

#[derive(Debug, Clone)]
enum BodyStmt {
    Call {
        name: String,
        params: Vec<Expr>,
        args: Vec<usize>,
        line: usize,
    },
    Barrier(Vec<usize>),
}

#[derive(Debug, Clone)]
struct GateDef {
    params: Vec<String>,
    num_args: usize,
    body: Vec<BodyStmt>,
}

#[derive(Debug, Clone)]
struct Register {
    name: String,
    offset: usize,
    size: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qregs: Vec<Register>,
    cregs: Vec<Register>,
    defs: HashMap<String, GateDef>,
    circuit: Circuit,
}

/// Parses the supported OpenQASM 2.0 subset into a flat gate list. Quantum
/// registers are concatenated in declaration order, as are classical ones.
pub fn parse_qasm(source: &str) -> Result<Circuit> {
    let mut p = Parser {
        toks: tokenize(source)?,
        pos: 0,
        qregs: Vec::new(),
        cregs: Vec::new(),
        defs: HashMap::new(),
        circuit: Circuit::default(),
    };
    p.program()?;
    p.circuit.validate()?;
    Ok(p.circuit)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, tok: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: tok.line,
            column: tok.column,
            message: message.into(),
        })
    }

    fn expect_sym(&mut self, s: &str) -> Result<Token> {
        let t = self.next();
        match t.tok {
            Tok::Sym(x) if x == s => Ok(t),
            _ => self.err(&t, format!("expected `{s}`, found {:?}", t.tok)),
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek().tok, Tok::Sym(x) if x == s) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => self.err(&t, format!("expected identifier, found {:?}", t.tok)),
        }
    }

    fn int(&mut self) -> Result<usize> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok(v),
            _ => self.err(&t, format!("expected integer, found {:?}", t.tok)),
        }
    }

    fn program(&mut self) -> Result<()> {
        let first = self.peek().clone();
        if matches!(&first.tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let v = self.next();
            match v.tok {
                Tok::Real(x) if (x - 2.0).abs() < 1e-12 => {}
                Tok::Int(2) => {}
                _ => return self.err(&v, "only OPENQASM 2.0 is supported"),
            }
            self.expect_sym(";")?;
        }
        while self.peek().tok != Tok::Eof {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<()> {
        let (word, tok) = self.ident()?;
        let line = tok.line;
        match word.as_str() {
            "include" => {
                let t = self.next();
                match &t.tok {
                    Tok::Str(s) if s == "qelib1.inc" => {}
                    Tok::Str(s) => {
                        return Err(Error::Unsupported {
                            what: format!("include of `{s}`"),
                            line,
                        })
                    }
                    _ => return self.err(&t, "expected include file name"),
                }
                self.expect_sym(";")?;
            }
            "qreg" | "creg" => {
                let (name, ntok) = self.ident()?;
                self.expect_sym("[")?;
                let size = self.int()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                if self.qregs.iter().chain(&self.cregs).any(|r| r.name == name) {
                    return self.err(&ntok, format!("register `{name}` redeclared"));
                }
                if word == "qreg" {
                    let offset = self.circuit.num_qubits;
                    self.qregs.push(Register { name, offset, size });
                    self.circuit.num_qubits += size;
                } else {
                    let offset = self.circuit.num_clbits;
                    self.cregs.push(Register { name, offset, size });
                    self.circuit.num_clbits += size;
                }
            }
            "gate" => self.gate_def()?,
            "opaque" => {
                return Err(Error::Unsupported {
                    what: "opaque gate declaration".into(),
                    line,
                })
            }
            "if" => {
                return Err(Error::Unsupported {
                    what: "classically conditioned operation".into(),
                    line,
                })
            }
            "reset" => {
                return Err(Error::Unsupported {
                    what: "reset".into(),
                    line,
                })
            }
            "measure" => {
                let q = self.argument(true)?;
                self.expect_sym("->")?;
                let c = self.argument(false)?;
                self.expect_sym(";")?;
                if q.len() != c.len() {
                    return self.err(&tok, "measure register sizes differ");
                }
                for (q, c) in q.into_iter().zip(c) {
                    self.circuit.push(Gate::measure(q, c));
                }
            }
            "barrier" => {
                let mut qubits = Vec::new();
                loop {
                    for q in self.argument(true)? {
                        if !qubits.contains(&q) {
                            qubits.push(q);
                        }
                    }
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.expect_sym(";")?;
                self.circuit.push(Gate::barrier(qubits));
            }
            _ => self.gate_call(word, tok)?,
        }
        Ok(())
    }

    /// A register reference: whole register or a single indexed element.
    fn argument(&mut self, quantum: bool) -> Result<Vec<usize>> {
        let (name, tok) = self.ident()?;
        let regs = if quantum { &self.qregs } else { &self.cregs };
        let Some(reg) = regs.iter().find(|r| r.name == name).cloned() else {
            return self.err(
                &tok,
                format!(
                    "undeclared {} register `{name}`",
                    if quantum { "quantum" } else { "classical" }
                ),
            );
        };
        if self.eat_sym("[") {
            let index = self.int()?;
            self.expect_sym("]")?;
            if index >= reg.size {
                return Err(Error::IndexOutOfRange {
                    register: name,
                    index,
                    size: reg.size,
                    line: tok.line,
                });
            }
            Ok(vec![reg.offset + index])
        } else {
            Ok((reg.offset..reg.offset + reg.size).collect())
        }
    }

    fn expr_list(&mut self) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if self.eat_sym("(") {
            if self.eat_sym(")") {
                return Ok(out);
            }
            loop {
                out.push(self.expr()?);
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym("+") => '+',
                Tok::Sym("-") => '-',
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym("*") => '*',
                Tok::Sym("/") => '/',
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        if self.eat_sym("+") {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat_sym("^") {
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.factor()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(Expr::Num(*v as f64)),
            Tok::Real(v) => Ok(Expr::Num(*v)),
            Tok::Ident(s) if s == "pi" => Ok(Expr::Pi),
            Tok::Ident(s) => {
                if self.eat_sym("(") {
                    let e = self.expr()?;
                    self.expect_sym(")")?;
                    Ok(Expr::Call(s.clone(), Box::new(e)))
                } else {
                    Ok(Expr::Param(s.clone()))
                }
            }
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => self.err(&t, format!("expected expression, found {:?}", t.tok)),
        }
    }

    fn eval(&self, e: &Expr, env: &HashMap<String, f64>, tok: &Token) -> Result<f64> {
        e.eval(env).map_err(|message| Error::Syntax {
            line: tok.line,
            column: tok.column,
            message,
        })
    }

    /// Expected (parameter count, qubit count) of a callable gate.
    fn signature(&self, name: &str) -> Option<(usize, usize)> {
        if let Some(b) = builtin(name) {
            return Some(b.arity());
        }
        self.defs.get(name).map(|d| (d.params.len(), d.num_args))
    }

    fn gate_def(&mut self) -> Result<()> {
        let (name, name_tok) = self.ident()?;
        let mut params = Vec::new();
        if self.eat_sym("(") && !self.eat_sym(")") {
            loop {
                params.push(self.ident()?.0);
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        let mut args = Vec::new();
        loop {
            args.push(self.ident()?.0);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym("{")?;
        let mut body = Vec::new();
        while !self.eat_sym("}") {
            let (word, tok) = self.ident()?;
            let resolve = |p: &Parser, a: &str, t: &Token| -> Result<usize> {
                match args.iter().position(|x| x == a) {
                    Some(i) => Ok(i),
                    None => p.err(t, format!("unknown gate argument `{a}`")),
                }
            };
            if word == "barrier" {
                let mut qs = Vec::new();
                loop {
                    let (a, t) = self.ident()?;
                    qs.push(resolve(self, &a, &t)?);
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.expect_sym(";")?;
                body.push(BodyStmt::Barrier(qs));
                continue;
            }
            let Some((np, nq)) = self.signature(&word) else {
                return Err(Error::UnsupportedGate {
                    name: word,
                    line: tok.line,
                });
            };
            let ps = self.expr_list()?;
            let mut qs = Vec::new();
            loop {
                let (a, t) = self.ident()?;
                qs.push(resolve(self, &a, &t)?);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(";")?;
            if ps.len() != np || qs.len() != nq {
                return self.err(&tok, format!("wrong operand count for `{word}`"));
            }
            body.push(BodyStmt::Call {
                name: word,
                params: ps,
                args: qs,
                line: tok.line,
            });
        }
        // Redefining a builtin (e.g. a pasted qelib1 body) keeps the builtin.
        if builtin(&name).is_some() {
            return Ok(());
        }
        if self.defs.contains_key(&name) {
            return self.err(&name_tok, format!("gate `{name}` redefined"));
        }
        self.defs.insert(
            name,
            GateDef {
                params,
                num_args: args.len(),
                body,
            },
        );
        Ok(())
    }

    fn gate_call(&mut self, name: String, tok: Token) -> Result<()> {
        let Some((np, nq)) = self.signature(&name) else {
            return Err(Error::UnsupportedGate {
                name,
                line: tok.line,
            });
        };
        let exprs = self.expr_list()?;
        let mut args = Vec::new();
        loop {
            args.push(self.argument(true)?);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(";")?;
        if exprs.len() != np {
            return self.err(
                &tok,
                format!("`{name}` takes {np} parameters, got {}", exprs.len()),
            );
        }
        if args.len() != nq {
            return self.err(
                &tok,
                format!("`{name}` takes {nq} qubits, got {}", args.len()),
            );
        }
        let empty = HashMap::new();
        let params = exprs
            .iter()
            .map(|e| self.eval(e, &empty, &tok))
            .collect::<Result<Vec<_>>>()?;
        let width = args.iter().map(Vec::len).max().unwrap_or(1);
        if args.iter().any(|a| a.len() != 1 && a.len() != width) {
            return self.err(&tok, "register sizes differ in broadcast");
        }
        for k in 0..width {
            let qubits: Vec<usize> = args
                .iter()
                .map(|a| if a.len() == 1 { a[0] } else { a[k] })
                .collect();
            for i in 0..qubits.len() {
                if qubits[i + 1..].contains(&qubits[i]) {
                    return self.err(&tok, format!("repeated qubit argument to `{name}`"));
                }
            }
            self.expand(&name, &params, &qubits, &tok)?;
        }
        Ok(())
    }

    fn expand(&mut self, name: &str, params: &[f64], qubits: &[usize], tok: &Token) -> Result<()> {
        match builtin(name) {
            Some(Builtin::OneQubit(canon, _)) => {
                self.circuit
                    .push(Gate::one_qubit(canon, params.to_vec(), qubits[0]));
            }
            Some(Builtin::Cx) => self.circuit.push(Gate::cx(qubits[0], qubits[1])),
            Some(Builtin::Swap) => self.circuit.push(Gate::swap(qubits[0], qubits[1])),
            None => {
                let def = self.defs[name].clone();
                let env: HashMap<String, f64> =
                    def.params.iter().cloned().zip(params.iter().copied()).collect();
                for stmt in &def.body {
                    match stmt {
                        BodyStmt::Barrier(qs) => {
                            let mut mapped: Vec<usize> = Vec::new();
                            for &i in qs {
                                if !mapped.contains(&qubits[i]) {
                                    mapped.push(qubits[i]);
                                }
                            }
                            self.circuit.push(Gate::barrier(mapped));
                        }
                        BodyStmt::Call {
                            name,
                            params,
                            args,
                            line,
                        } => {
                            let inner_tok = Token {
                                tok: tok.tok.clone(),
                                line: *line,
                                column: tok.column,
                            };
                            let values = params
                                .iter()
                                .map(|e| self.eval(e, &env, &inner_tok))
                                .collect::<Result<Vec<_>>>()?;
                            let mapped: Vec<usize> = args.iter().map(|&i| qubits[i]).collect();
                            if mapped.len() == 2 && mapped[0] == mapped[1] {
                                return self
                                    .err(tok, format!("gate `{name}` applied to one qubit twice"));
                            }
                            self.expand(name, &values, &mapped, tok)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
