//! Polynomial expressions in `z1..zn` and their conjugates, as hash-consed DAGs.

use std::collections::HashMap;
use std::fmt;

use crate::error::ParseError;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Index into [`PolyExpr::nodes`].
pub type NodeRef = usize;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExprNode {
    Input(usize),
    Const(C),
    Add(NodeRef, NodeRef),
    Mul(NodeRef, NodeRef),
    Conj(NodeRef),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Input(usize),
    Const(u64, u64),
    Add(NodeRef, NodeRef),
    Mul(NodeRef, NodeRef),
    Conj(NodeRef),
}

fn canon(x: f64) -> u64 {
    // Treat -0 and 0 alike.
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

/// Expression DAG. Nodes are stored in creation order, so every operand precedes
/// its users; identical subexpressions share one node.
#[derive(Clone, Debug, Default)]
pub struct PolyExpr {
    pub arity: usize,
    pub nodes: Vec<ExprNode>,
    pub outputs: Vec<NodeRef>,
    index: HashMap<Key, NodeRef>,
}

impl PartialEq for PolyExpr {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.nodes == other.nodes && self.outputs == other.outputs
    }
}

impl PolyExpr {
    pub fn new(arity: usize) -> PolyExpr {
        PolyExpr {
            arity,
            ..Default::default()
        }
    }

    fn intern(&mut self, node: ExprNode) -> NodeRef {
        let key = match node {
            ExprNode::Input(i) => Key::Input(i),
            ExprNode::Const(z) => Key::Const(canon(z.re), canon(z.im)),
            // Commutative operands in a fixed order.
            ExprNode::Add(a, b) => Key::Add(a.min(b), a.max(b)),
            ExprNode::Mul(a, b) => Key::Mul(a.min(b), a.max(b)),
            ExprNode::Conj(a) => Key::Conj(a),
        };
        if let Some(&r) = self.index.get(&key) {
            return r;
        }
        let node = match node {
            ExprNode::Add(a, b) => ExprNode::Add(a.min(b), a.max(b)),
            ExprNode::Mul(a, b) => ExprNode::Mul(a.min(b), a.max(b)),
            ExprNode::Const(z) => ExprNode::Const(C::new(z.re + 0.0, z.im + 0.0)),
            n => n,
        };
        self.nodes.push(node);
        self.index.insert(key, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    pub fn constant_value(&self, r: NodeRef) -> Option<C> {
        match self.nodes[r] {
            ExprNode::Const(z) => Some(z),
            _ => None,
        }
    }

    /// Input node `i` (0-based). Panics if `i >= arity`.
    pub fn input(&mut self, i: usize) -> NodeRef {
        assert!(i < self.arity, "input {i} out of range for arity {}", self.arity);
        self.intern(ExprNode::Input(i))
    }

    pub fn constant(&mut self, z: C) -> NodeRef {
        self.intern(ExprNode::Const(z))
    }

    pub fn add(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        match (self.constant_value(a), self.constant_value(b)) {
            (Some(x), Some(y)) => self.constant(x + y),
            (Some(x), None) if x == C::new(0.0, 0.0) => b,
            (None, Some(y)) if y == C::new(0.0, 0.0) => a,
            _ => self.intern(ExprNode::Add(a, b)),
        }
    }

    pub fn mul(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        match (self.constant_value(a), self.constant_value(b)) {
            (Some(x), Some(y)) => self.constant(x * y),
            (Some(x), _) | (_, Some(x)) if x == zero => self.constant(zero),
            (Some(x), None) if x == one => b,
            (None, Some(y)) if y == one => a,
            _ => self.intern(ExprNode::Mul(a, b)),
        }
    }

    pub fn neg(&mut self, a: NodeRef) -> NodeRef {
        let m = self.constant(C::new(-1.0, 0.0));
        self.mul(m, a)
    }

    pub fn sub(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        let nb = self.neg(b);
        self.add(a, nb)
    }

    pub fn conj(&mut self, a: NodeRef) -> NodeRef {
        match self.nodes[a] {
            ExprNode::Const(z) => self.constant(z.conj()),
            ExprNode::Conj(x) => x,
            _ => self.intern(ExprNode::Conj(a)),
        }
    }

    /// Values of every node at `z`.
    pub fn eval_nodes(&self, z: &[C]) -> Vec<C> {
        let mut v: Vec<C> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let x = match *n {
                ExprNode::Input(i) => z[i],
                ExprNode::Const(c) => c,
                ExprNode::Add(a, b) => v[a] + v[b],
                ExprNode::Mul(a, b) => v[a] * v[b],
                ExprNode::Conj(a) => v[a].conj(),
            };
            v.push(x);
        }
        v
    }

    /// Output tuple at `z`; `z.len()` must equal the arity.
    pub fn eval(&self, z: &[C]) -> Vec<C> {
        let v = self.eval_nodes(z);
        self.outputs.iter().map(|&o| v[o]).collect()
    }

    /// Composition `self(inner(z))`: every input `i` of `self` is replaced by
    /// output `i` of `inner`.
    pub fn substitute(&self, inner: &PolyExpr) -> PolyExpr {
        assert_eq!(inner.outputs.len(), self.arity, "substitution arity mismatch");
        let mut out = inner.clone();
        out.outputs.clear();
        let mut map: Vec<NodeRef> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let r = match *n {
                ExprNode::Input(i) => inner.outputs[i],
                ExprNode::Const(c) => out.constant(c),
                ExprNode::Add(a, b) => out.add(map[a], map[b]),
                ExprNode::Mul(a, b) => out.mul(map[a], map[b]),
                ExprNode::Conj(a) => out.conj(map[a]),
            };
            map.push(r);
        }
        out.outputs = self.outputs.iter().map(|&o| map[o]).collect();
        out
    }

    /// The expression obtained by re-parsing its own rendering until that stops
    /// changing. Parsing the rendering of a canonical expression reproduces it
    /// node for node.
    pub fn canonical(&self) -> PolyExpr {
        let mut cur = self.clone();
        for _ in 0..8 {
            let next = parse_poly(&cur.to_string(), cur.arity).expect("rendered expressions parse");
            if next == cur {
                return next;
            }
            cur = next;
        }
        cur
    }

    /// Text form that parses back to the same map.
    pub fn render(&self, r: NodeRef) -> String {
        match self.nodes[r] {
            ExprNode::Input(i) => format!("z{}", i + 1),
            ExprNode::Const(c) => format!("({}{:+}i)", c.re, c.im),
            ExprNode::Add(a, b) => format!("({} + {})", self.render(a), self.render(b)),
            ExprNode::Mul(a, b) => format!("{}*{}", self.render(a), self.render(b)),
            ExprNode::Conj(a) => format!("conj({})", self.render(a)),
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.outputs.iter().map(|&o| self.render(o)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// `a+bi` with integers printed without a fraction, values rounded to 12 decimals
/// and negative zero printed as 0.
pub fn format_complex(z: C) -> String {
    fn clean(x: f64) -> f64 {
        let r = (x * 1e12).round() / 1e12;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    }
    let (re, im) = (clean(z.re), clean(z.im));
    if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Var(usize),
    Conj,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str, arity: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            // Exponent, only when followed by digits.
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let x: f64 = text[start..i].parse().map_err(|_| ParseError::Syntax {
                pos: start,
                msg: format!("bad number {:?}", &text[start..i]),
            })?;
            if i < b.len() && b[i] == b'i' && !b.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric()) {
                i += 1;
                out.push((start, Tok::Imag(x)));
            } else {
                out.push((start, Tok::Num(x)));
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "i" => Tok::Imag(1.0),
                "conj" => Tok::Conj,
                w => {
                    let k = w
                        .strip_prefix('z')
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&k| k >= 1 && k <= arity);
                    match k {
                        Some(k) => Tok::Var(k - 1),
                        None => {
                            return Err(ParseError::UnknownVariable {
                                pos: start,
                                name: w.to_string(),
                            })
                        }
                    }
                }
            };
            out.push((start, tok));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((start, tok));
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    expr: PolyExpr,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn sum(&mut self) -> Result<NodeRef, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    let r = self.product()?;
                    acc = self.expr.add(acc, r);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    let r = self.product()?;
                    acc = self.expr.sub(acc, r);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<NodeRef, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            let r = self.unary()?;
            acc = self.expr.mul(acc, r);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<NodeRef, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                let x = self.unary()?;
                Ok(self.expr.neg(x))
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<NodeRef, ParseError> {
        let Some(t) = self.peek().cloned() else {
            return self.fail("unexpected end of input");
        };
        self.at += 1;
        match t {
            Tok::Num(x) => Ok(self.expr.constant(C::new(x, 0.0))),
            Tok::Imag(y) => Ok(self.expr.constant(C::new(0.0, y))),
            Tok::Var(k) => Ok(self.expr.input(k)),
            Tok::Conj => {
                self.expect(Tok::LParen, "'(' after conj")?;
                let x = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(self.expr.conj(x))
            }
            Tok::LParen => {
                let x = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(x)
            }
            _ => {
                self.at -= 1;
                self.fail("expected a number, variable, conj or '('")
            }
        }
    }
}

/// Parses a comma-separated list of polynomial expressions in `z1..z{arity}`.
pub fn parse_poly(text: &str, arity: usize) -> Result<PolyExpr, ParseError> {
    let toks = lex(text, arity)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        expr: PolyExpr::new(arity),
    };
    let mut outs = vec![p.sum()?];
    while p.peek() == Some(&Tok::Comma) {
        p.at += 1;
        outs.push(p.sum()?);
    }
    if p.at != p.toks.len() {
        return p.fail("trailing input");
    }
    p.expr.outputs = outs;
    Ok(p.expr)
}

/// Smallest arity covering every `zk` mentioned in `text` (at least 1).
pub fn infer_arity(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 1;
    let mut i = 0;
    while i < b.len() {
        let boundary = i == 0 || !(b[i - 1].is_ascii_alphanumeric() || b[i - 1] == b'_');
        if b[i] == b'z' && boundary {
            let mut j = i + 1;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 1 && !b.get(j).is_some_and(|c| c.is_ascii_alphabetic()) {
                if let Ok(k) = text[i + 1..j].parse::<usize>() {
                    best = best.max(k);
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` or `i` as one complex number.
pub fn parse_complex(text: &str) -> Result<C, ParseError> {
    let e = parse_poly(text, 0)?;
    match (e.outputs.as_slice(), e.outputs.first().and_then(|&o| e.constant_value(o))) {
        ([_], Some(z)) => Ok(z),
        _ => Err(ParseError::Syntax {
            pos: 0,
            msg: format!("{text:?} is not a single complex number"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let e = parse_poly("z1*conj(z1) - 1", 1).unwrap();
        let kinds: Vec<&str> = e
            .nodes
            .iter()
            .map(|n| match n {
                ExprNode::Input(_) => "input",
                ExprNode::Const(_) => "const",
                ExprNode::Add(..) => "add",
                ExprNode::Mul(..) => "mul",
                ExprNode::Conj(_) => "conj",
            })
            .collect();
        for k in ["mul", "conj", "const", "add"] {
            assert!(kinds.contains(&k), "{kinds:?}");
        }
        let s = parse_poly("z1 + z2", 2).unwrap();
        assert_eq!(s.nodes[s.outputs[0]], ExprNode::Add(0, 1));
        let sq = parse_poly("(z1+z2)*(z1+z2)", 2).unwrap();
        let adds = sq.nodes.iter().filter(|n| matches!(n, ExprNode::Add(..))).count();
        assert_eq!(adds, 1);
        assert!(matches!(sq.nodes[sq.outputs[0]], ExprNode::Mul(a, b) if a == b));
    }

    #[test]
    fn literals_and_errors() {
        assert_eq!(parse_complex("2-3i").unwrap(), C::new(2.0, -3.0));
        assert_eq!(parse_complex("i").unwrap(), C::new(0.0, 1.0));
        assert_eq!(parse_complex("-0.5").unwrap(), C::new(-0.5, 0.0));
        assert_eq!(parse_complex("1e-3i").unwrap(), C::new(0.0, 1e-3));
        assert!(matches!(parse_poly("z3", 2), Err(ParseError::UnknownVariable { pos: 0, .. })));
        assert!(matches!(parse_poly("z1 +", 1), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("z1 ^ 2", 1), Err(ParseError::Syntax { pos: 3, .. })));
        assert_eq!(infer_arity("z1*conj(z3) + 2"), 3);
        assert_eq!(format_complex(C::new(-0.0, 0.5)), "0+0.5i");
        assert_eq!(format_complex(C::new(1.0, -2.0)), "1-2i");
    }

    #[test]
    fn evaluation_and_substitution() {
        let e = parse_poly("z1*z2 + conj(z1) - 2i", 2).unwrap();
        let z = [C::new(1.0, 2.0), C::new(-0.5, 0.25)];
        let want = z[0] * z[1] + z[0].conj() - C::new(0.0, 2.0);
        assert!((e.eval(&z)[0] - want).norm() < 1e-15);
        let alpha = parse_poly("z1*z1", 1).unwrap();
        let inner = parse_poly("z1 + conj(z1)", 1).unwrap();
        let g = alpha.substitute(&inner);
        let w = C::new(0.3, 0.7);
        assert!((g.eval(&[w])[0] - C::new(0.36, 0.0)).norm() < 1e-15);
        let back = parse_poly(&g.to_string(), 1).unwrap();
        assert!((back.eval(&[w])[0] - g.eval(&[w])[0]).norm() < 1e-15);
    }

    #[test]
    fn canonical_rendering_reparses_exactly() {
        let z = [C::new(0.3, -0.7), C::new(1.1, 0.2)];
        for text in ["z1*conj(z1) - 1", "z1 + i*z1*(1 - z1)", "-(z2 - 3)*z1*z1 + conj(z2*z1)", "1 - z1*conj(z1), z2"] {
            let e = parse_poly(text, 2).unwrap();
            let c = e.canonical();
            assert_eq!(parse_poly(&c.to_string(), 2).unwrap(), c, "{text}");
            for (a, b) in c.eval(&z).iter().zip(e.eval(&z)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
