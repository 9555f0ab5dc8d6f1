//! Lowering of polynomial expressions to composed gadgets, and the set and curve
//! constructions built on top.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::bounds;
use crate::error::{CompileError, GadgetError};
use crate::expr::{ExprNode, PolyExpr};
use crate::gadgets::{
    affine_on, average_gadget, compose, conjugation_on, constant_gadget, degree_value, inversion_gadget,
    product, projection_gadget, translation_on, Disc, Domain, FunctionalGadget,
};
use crate::linkage::{Configuration, Linkage, PlanePoint, VertexId};

type C = PlanePoint;

/// Largest disc reach any node may have before gadget sizes stop being meaningful.
pub const MAX_REACH: f64 = 1e8;

/// Smallest radius handed to a gadget; degenerate discs are widened to this.
pub const MIN_RADIUS: f64 = 1e-3;

/// Samples used to pick tether anchors in [`realize_set`].
pub const BOUND_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Classical,
    Cabled,
}

impl Mode {
    pub fn cabled(self) -> bool {
        self == Mode::Cabled
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Classical => "classical",
            Mode::Cabled => "cabled",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "classical" => Ok(Mode::Classical),
            "cabled" => Ok(Mode::Cabled),
            _ => Err(format!("mode must be classical or cabled, got {s:?}")),
        }
    }
}

/// Elementary operations the gadgets implement directly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Op {
    Input(usize),
    Const(C),
    Add(usize, usize),
    /// `x + c`
    Shift(usize, C),
    /// `λx`, λ real
    Scale(usize, f64),
    Conj(usize),
    Square(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum OpKey {
    Input(usize),
    Const(u64, u64),
    Add(usize, usize),
    Shift(usize, u64, u64),
    Scale(usize, u64),
    Conj(usize),
    Square(usize),
}

fn bits(x: f64) -> u64 {
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

/// Straight-line program over [`Op`], hash-consed, operands before users.
#[derive(Clone, Debug, Default)]
pub struct Program {
    pub ops: Vec<Op>,
    pub outputs: Vec<usize>,
    index: HashMap<OpKey, usize>,
}

impl Program {
    fn push(&mut self, op: Op) -> usize {
        let key = match op {
            Op::Input(i) => OpKey::Input(i),
            Op::Const(z) => OpKey::Const(bits(z.re), bits(z.im)),
            Op::Add(a, b) => OpKey::Add(a.min(b), a.max(b)),
            Op::Shift(a, c) => OpKey::Shift(a, bits(c.re), bits(c.im)),
            Op::Scale(a, l) => OpKey::Scale(a, bits(l)),
            Op::Conj(a) => OpKey::Conj(a),
            Op::Square(a) => OpKey::Square(a),
        };
        if let Some(&r) = self.index.get(&key) {
            return r;
        }
        self.ops.push(op);
        self.index.insert(key, self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn constant(&mut self, z: C) -> usize {
        self.push(Op::Const(z))
    }

    fn as_const(&self, a: usize) -> Option<C> {
        match self.ops[a] {
            Op::Const(z) => Some(z),
            _ => None,
        }
    }

    fn shift(&mut self, a: usize, c: C) -> usize {
        if let Some(z) = self.as_const(a) {
            return self.constant(z + c);
        }
        if c == C::new(0.0, 0.0) {
            return a;
        }
        match self.ops[a] {
            Op::Shift(x, d) => self.shift(x, c + d),
            _ => self.push(Op::Shift(a, c)),
        }
    }

    fn scale(&mut self, a: usize, l: f64) -> usize {
        if let Some(z) = self.as_const(a) {
            return self.constant(z * l);
        }
        if l == 0.0 {
            return self.constant(C::new(0.0, 0.0));
        }
        if l == 1.0 {
            return a;
        }
        match self.ops[a] {
            Op::Scale(x, m) => self.scale(x, l * m),
            _ => self.push(Op::Scale(a, l)),
        }
    }

    fn add(&mut self, a: usize, b: usize) -> usize {
        match (self.as_const(a), self.as_const(b)) {
            (Some(x), Some(y)) => self.constant(x + y),
            (Some(x), None) => self.shift(b, x),
            (None, Some(y)) => self.shift(a, y),
            _ if a == b => self.scale(a, 2.0),
            _ => self.push(Op::Add(a, b)),
        }
    }

    fn square(&mut self, a: usize) -> usize {
        match self.as_const(a) {
            Some(z) => self.constant(z * z),
            None => self.push(Op::Square(a)),
        }
    }

    /// `ab = ((a+b)² − (a−b)²)/4`; a complex constant factor `c` uses
    /// `cx = ((x+c)² − (x−c)²)/4`.
    fn mul(&mut self, a: usize, b: usize) -> usize {
        match (self.as_const(a), self.as_const(b)) {
            (Some(x), Some(y)) => return self.constant(x * y),
            (Some(c), None) | (None, Some(c)) if c.im == 0.0 => {
                let x = if self.as_const(a).is_some() { b } else { a };
                return self.scale(x, c.re);
            }
            (Some(c), None) | (None, Some(c)) => {
                let x = if self.as_const(a).is_some() { b } else { a };
                let p = self.shift(x, c);
                let m = self.shift(x, -c);
                let (sp, sm) = (self.square(p), self.square(m));
                let nm = self.scale(sm, -1.0);
                let diff = self.add(sp, nm);
                return self.scale(diff, 0.25);
            }
            _ => {}
        }
        if a == b {
            return self.square(a);
        }
        let s = self.add(a, b);
        let nb = self.scale(b, -1.0);
        let d = self.add(a, nb);
        let (ss, sd) = (self.square(s), self.square(d));
        let nsd = self.scale(sd, -1.0);
        let diff = self.add(ss, nsd);
        self.scale(diff, 0.25)
    }

    fn conj(&mut self, a: usize) -> usize {
        match self.ops[a] {
            Op::Const(z) => self.constant(z.conj()),
            Op::Conj(x) => x,
            _ => self.push(Op::Conj(a)),
        }
    }

    /// Lowers `e`; ops `0..arity` are the inputs in order.
    pub fn lower(e: &PolyExpr) -> Program {
        let mut p = Program::default();
        for i in 0..e.arity {
            p.push(Op::Input(i));
        }
        let mut map = Vec::with_capacity(e.nodes.len());
        for n in &e.nodes {
            let r = match *n {
                ExprNode::Input(i) => i,
                ExprNode::Const(c) => p.constant(c),
                ExprNode::Add(a, b) => p.add(map[a], map[b]),
                ExprNode::Mul(a, b) => p.mul(map[a], map[b]),
                ExprNode::Conj(a) => p.conj(map[a]),
            };
            map.push(r);
        }
        p.outputs = e.outputs.iter().map(|&o| map[o]).collect();
        p
    }

    pub fn operands(&self, i: usize) -> Vec<usize> {
        match self.ops[i] {
            Op::Input(_) | Op::Const(_) => vec![],
            Op::Shift(a, _) | Op::Scale(a, _) | Op::Conj(a) | Op::Square(a) => vec![a],
            Op::Add(a, b) => vec![a, b],
        }
    }

    pub fn eval(&self, z: &[C]) -> Vec<C> {
        let mut v: Vec<C> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let x = match *op {
                Op::Input(i) => z[i],
                Op::Const(c) => c,
                Op::Add(a, b) => v[a] + v[b],
                Op::Shift(a, c) => v[a] + c,
                Op::Scale(a, l) => v[a] * l,
                Op::Conj(a) => v[a].conj(),
                Op::Square(a) => v[a] * v[a],
            };
            v.push(x);
        }
        v
    }

    /// Certified disc of every op, given the input discs.
    pub fn discs(&self, region: &[Disc]) -> Vec<Disc> {
        let mut d: Vec<Disc> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let x = match *op {
                Op::Input(i) => region[i],
                Op::Const(c) => bounds::point(c),
                Op::Add(a, b) => bounds::add(d[a], d[b]),
                Op::Shift(a, c) => bounds::shift(d[a], c),
                Op::Scale(a, l) => bounds::scale(d[a], l),
                Op::Conj(a) => bounds::conj(d[a]),
                Op::Square(a) => bounds::square(d[a]),
            };
            d.push(x);
        }
        d
    }
}

fn pad(r: f64) -> f64 {
    r.max(MIN_RADIUS)
}

/// `(z, w) ↦ (z + w)/2 + shift` on the given discs, from an average gadget with
/// translations moving both discs onto its domain.
fn average_on(a: Disc, b: Disc, shift: C, cabled: bool, pre: &str) -> Result<FunctionalGadget, GadgetError> {
    let r = pad(a.radius.max(b.radius));
    let (avg, k) = average_gadget(r, cabled)?;
    let avg = avg.namespaced(&format!("{pre}avg/"));
    let ta = translation_on(a.center, r, k.z0 - a.center, cabled)?.namespaced(&format!("{pre}ta/"));
    let tb = translation_on(b.center, r, -k.z0 - b.center, cabled)?.namespaced(&format!("{pre}tb/"));
    let post = translation_on(C::new(0.0, 0.0), r, (a.center + b.center) / 2.0 + shift, cabled)?
        .namespaced(&format!("{pre}tc/"));
    compose(&compose(&product(&[&ta, &tb])?, &avg)?, &post)
}

/// `(z, w) ↦ z + w`: average, then doubling.
fn add_on(a: Disc, b: Disc, cabled: bool, pre: &str) -> Result<FunctionalGadget, GadgetError> {
    let r = pad(a.radius.max(b.radius));
    let (avg, k) = average_gadget(r, cabled)?;
    let avg = avg.namespaced(&format!("{pre}avg/"));
    let ta = translation_on(a.center, r, k.z0 - a.center, cabled)?.namespaced(&format!("{pre}ta/"));
    let tb = translation_on(b.center, r, -k.z0 - b.center, cabled)?.namespaced(&format!("{pre}tb/"));
    let post = affine_on(C::new(0.0, 0.0), r, 2.0, a.center + b.center, cabled)?
        .namespaced(&format!("{pre}x2/"));
    let mut g = compose(&compose(&product(&[&ta, &tb])?, &avg)?, &post)?;
    g.name = "add".into();
    Ok(g)
}

/// Constants of the squarer for a disc reaching out to `reach`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquarerConstants {
    /// Enclosing radius about the origin.
    pub reach: f64,
    /// Inversion radius, `2·reach + 1`.
    pub t: f64,
    /// Radius about `t` of `h(t ± z)`.
    pub r_h: f64,
    /// Radius about `t` of the average `(h(t+z) + h(t−z))/2`.
    pub r_avg: f64,
    /// Radius about `t` of `h` of the average.
    pub r_out: f64,
}

impl SquarerConstants {
    pub fn for_reach(reach: f64) -> SquarerConstants {
        let r = pad(reach);
        let t = 2.0 * r + 1.0;
        let r_h = t * r / (t - r);
        let r_avg = t * r * r / (t * t - r * r);
        SquarerConstants {
            reach: r,
            t,
            r_h,
            r_avg,
            r_out: t * r_avg / (t - r_avg),
        }
    }
}

/// `h(u) = t²/ū`.
pub fn squarer_h(t: f64, u: C) -> C {
    t * t / u.conj()
}

/// Left side of the squaring identity, `t² − t·h((h(t+z) + h(t−z))/2)`.
pub fn squarer_identity(t: f64, z: C) -> C {
    let tc = C::new(t, 0.0);
    let avg = (squarer_h(t, tc + z) + squarer_h(t, tc - z)) / 2.0;
    tc * t - squarer_h(t, avg) * t
}

/// `z ↦ z²` on `d`, from three inversions.
fn square_on(d: Disc, cabled: bool, pre: &str) -> Result<FunctionalGadget, GadgetError> {
    let k = SquarerConstants::for_reach(bounds::reach(d));
    let (r, t) = (k.reach, k.t);
    let tc = C::new(t, 0.0);
    let zero = C::new(0.0, 0.0);
    let mut dup = projection_gadget(1, &[0, 0])?.namespaced(&format!("{pre}dup/"));
    dup.domain = Domain::disc(d.center, pad(d.radius));
    let plus = translation_on(zero, r, tc, cabled)?.namespaced(&format!("{pre}p/"));
    let minus = affine_on(zero, r, -1.0, tc, cabled)?.namespaced(&format!("{pre}m/"));
    let h1 = inversion_gadget(t, tc, r, cabled)?.namespaced(&format!("{pre}h1/"));
    let h2 = inversion_gadget(t, tc, r, cabled)?.namespaced(&format!("{pre}h2/"));
    let avg = average_on(
        Disc::new(tc, k.r_h),
        Disc::new(tc, k.r_h),
        zero,
        cabled,
        &format!("{pre}a/"),
    )?;
    let h3 = inversion_gadget(t, tc, r, cabled)?.namespaced(&format!("{pre}h3/"));
    let post = affine_on(tc, k.r_out, -t, tc * t, cabled)?.namespaced(&format!("{pre}q/"));
    let mut g = compose(&dup, &product(&[&plus, &minus])?)?;
    g = compose(&g, &product(&[&h1, &h2])?)?;
    g = compose(&g, &avg)?;
    g = compose(&g, &h3)?;
    g = compose(&g, &post)?;
    g.name = "square".into();
    Ok(g)
}

/// Compiled gadget with its bookkeeping.
#[derive(Clone, Debug)]
pub struct CompiledLinkage {
    pub gadget: FunctionalGadget,
    pub mode: Mode,
    /// Product of the branch counts of every composed gadget (1 when cabled).
    pub degree: BigUint,
    pub domain: Domain,
    pub expr: PolyExpr,
    pub region: Vec<Disc>,
    pub program: Program,
    /// Certified disc of each op, and the vertex carrying its value.
    pub node_discs: Vec<Disc>,
    pub node_vertices: BTreeMap<usize, VertexId>,
}

impl CompiledLinkage {
    pub fn linkage(&self) -> &Linkage {
        &self.gadget.linkage
    }

    /// Residual gate matching the witness tolerance at this linkage's scale.
    pub fn tolerance(&self) -> f64 {
        let scale = self
            .gadget
            .linkage
            .edges()
            .map(|e| e.length)
            .chain(self.gadget.linkage.anchors().map(|(_, p)| p.norm()))
            .fold(1.0, f64::max);
        crate::gadgets::witness::tolerance_for(scale)
    }

    /// Metadata record: expression, mode, degree and region.
    pub fn meta(&self) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("expr".into(), Value::String(self.expr.to_string()));
        m.insert("mode".into(), Value::String(self.mode.to_string()));
        m.insert("degree".into(), degree_value(&self.degree));
        m.insert("region".into(), Value::String(format_region(&self.region)));
        m
    }
}

/// Region in the `c:r;c:r` form accepted by [`parse_region`].
pub fn format_region(discs: &[Disc]) -> String {
    discs
        .iter()
        .map(|d| format!("{}:{}", crate::expr::format_complex(d.center), d.radius))
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses `c1:r1;c2:r2;...` into discs.
pub fn parse_region(text: &str) -> Result<Vec<Disc>, CompileError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let (c, r) = part
                .rsplit_once(':')
                .ok_or_else(|| CompileError::BadRegion(format!("{part:?} is not center:radius")))?;
            let center = crate::expr::parse_complex(c.trim())?;
            let radius: f64 = r
                .trim()
                .parse()
                .map_err(|_| CompileError::BadRegion(format!("bad radius {r:?}")))?;
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(CompileError::BadRegion(format!("radius must be positive, got {radius}")));
            }
            Ok(Disc::new(center, radius))
        })
        .collect()
}

/// Compiles `expr` over `region` (one disc per input).
pub fn compile(expr: &PolyExpr, region: &[Disc], mode: Mode) -> Result<CompiledLinkage, CompileError> {
    let expr = &expr.canonical();
    if region.len() != expr.arity {
        return Err(CompileError::BadRegion(format!(
            "expression takes {} inputs but the region has {} discs",
            expr.arity,
            region.len()
        )));
    }
    if let Some(d) = region.iter().find(|d| !(d.radius > 0.0 && d.radius.is_finite())) {
        return Err(CompileError::BadRegion(format!("radius must be positive, got {}", d.radius)));
    }
    let cabled = mode.cabled();
    let prog = Program::lower(expr);
    let discs = prog.discs(region);
    let n = expr.arity;

    // Ops reachable from the outputs, in program order (a topological order).
    let mut needed = vec![false; prog.ops.len()];
    for &o in &prog.outputs {
        needed[o] = true;
    }
    for i in (0..prog.ops.len()).rev() {
        if needed[i] {
            for a in prog.operands(i) {
                needed[a] = true;
            }
        }
    }
    for (i, d) in discs.iter().enumerate() {
        if needed[i] && !(bounds::reach(*d) <= MAX_REACH) {
            return Err(CompileError::ScaleOverflow {
                node: i,
                radius: bounds::reach(*d),
            });
        }
    }
    let mut last_use = vec![0usize; prog.ops.len()];
    for i in 0..prog.ops.len() {
        if needed[i] {
            for a in prog.operands(i) {
                last_use[a] = last_use[a].max(i);
            }
        }
    }
    for &o in &prog.outputs {
        last_use[o] = usize::MAX;
    }

    let mut state = projection_gadget(n, &(0..n).collect::<Vec<_>>())?;
    state.domain = Domain::discs(region.to_vec());
    let input_name = |v: &VertexId| VertexId::new(format!("z{}", &v.as_str()[1..].parse::<usize>().unwrap_or(0) + 1));
    state = state.renamed(&input_name);
    let mut node_vertices: BTreeMap<usize, VertexId> = BTreeMap::new();
    for i in 0..n {
        node_vertices.insert(i, VertexId::new(format!("z{}", i + 1)));
    }
    let mut slots: Vec<usize> = (0..n).collect();

    for v in n..prog.ops.len() {
        if !needed[v] {
            continue;
        }
        let pre = format!("g{v}/");
        let d = |a: usize| discs[a];
        let g = match prog.ops[v] {
            Op::Input(_) => unreachable!("inputs come first"),
            Op::Const(c) => constant_gadget(c)?.namespaced(&pre),
            Op::Add(a, b) => add_on(d(a), d(b), cabled, &pre)?,
            Op::Shift(a, c) => translation_on(d(a).center, pad(d(a).radius), c, cabled)?.namespaced(&pre),
            Op::Scale(a, l) => {
                affine_on(d(a).center, pad(d(a).radius), l, C::new(0.0, 0.0), cabled)?.namespaced(&pre)
            }
            Op::Conj(a) => conjugation_on(d(a).center, pad(d(a).radius), cabled)?.namespaced(&pre),
            Op::Square(a) => square_on(d(a), cabled, &pre)?,
        };
        let slot_of = |x: usize| slots.iter().position(|&s| s == x).expect("operand is live");
        let args: Vec<usize> = prog.operands(v).into_iter().map(slot_of).collect();
        let keep: Vec<usize> = (0..slots.len()).filter(|&j| last_use[slots[j]] > v).collect();
        let mut wiring: Vec<usize> = args.clone();
        wiring.extend(&keep);
        let wire = projection_gadget(slots.len(), &wiring)?.namespaced(&format!("{pre}w/"));
        let ids: Vec<FunctionalGadget> = (0..keep.len())
            .map(|j| {
                projection_gadget(1, &[0])
                    .expect("index 0 is valid")
                    .namespaced(&format!("{pre}id{j}/"))
            })
            .collect();
        let mut parts: Vec<&FunctionalGadget> = vec![&g];
        parts.extend(ids.iter());
        let layer = product(&parts)?;
        state = compose(&compose(&state, &wire)?, &layer)?;
        node_vertices.insert(v, g.outputs[0].clone());
        let mut next = vec![v];
        next.extend(keep.iter().map(|&j| slots[j]));
        slots = next;
    }

    let picks: Vec<usize> = prog
        .outputs
        .iter()
        .map(|o| slots.iter().position(|s| s == o).expect("outputs stay live"))
        .collect();
    let fin = projection_gadget(slots.len(), &picks)?.namespaced("out/");
    let mut gadget = compose(&state, &fin)?;
    let e = expr.clone();
    gadget.map = std::sync::Arc::new(move |z: &[C]| e.eval(z));
    gadget.name = "compiled".into();
    gadget.params = BTreeMap::from([
        ("expr".to_string(), Value::String(expr.to_string())),
        ("mode".to_string(), Value::String(mode.to_string())),
    ]);
    let degree = gadget.degree.clone();
    let domain = gadget.domain.clone();
    Ok(CompiledLinkage {
        gadget,
        mode,
        degree,
        domain,
        expr: expr.clone(),
        region: region.to_vec(),
        program: prog,
        node_discs: discs,
        node_vertices,
    })
}

/// Linkage whose configuration space projects onto `{g_i = 0 (i < k), g_i ≥ 0 (i ≥ k)}`.
#[derive(Clone, Debug)]
pub struct RealizedSet {
    pub linkage: Linkage,
    pub compiled: CompiledLinkage,
    pub equalities: usize,
    /// Tether anchor (and cable length) per inequality.
    pub b: Vec<f64>,
}

impl RealizedSet {
    pub fn inputs(&self) -> &[VertexId] {
        &self.compiled.gadget.inputs
    }

    /// A configuration of [`RealizedSet::linkage`] over `z`, if one exists among
    /// the witness branches (tried up to `limit`).
    pub fn configuration_at(&self, z: &[C], tol: f64, limit: usize) -> Option<Configuration> {
        let g = &self.compiled.gadget;
        if !g.domain.contains(z) {
            return None;
        }
        let branches = g.branches_at(z, limit).ok()?;
        branches.into_iter().find_map(|(_, mut conf)| {
            for (v, p) in self.linkage.anchors() {
                if !conf.contains(v) {
                    conf.insert(v.clone(), p);
                }
            }
            (self.linkage.residual(&conf).ok()? <= tol).then_some(conf)
        })
    }

    pub fn solvable(&self, z: &[C], tol: f64) -> bool {
        self.configuration_at(z, tol, 1).is_some()
    }

    pub fn meta(&self) -> serde_json::Map<String, Value> {
        let mut m = self.compiled.meta();
        m.insert("equalities".into(), Value::from(self.equalities));
        m.insert(
            "b".into(),
            Value::Array(self.b.iter().map(|&x| crate::gadgets::param(x)).collect()),
        );
        m
    }
}

fn sample_region(region: &[Disc], rng: &mut impl Rng) -> Vec<C> {
    region
        .iter()
        .map(|d| d.center + C::from_polar(d.radius * rng.random::<f64>().sqrt(), rng.random::<f64>() * std::f64::consts::TAU))
        .collect()
}

/// Realizes the set cut out by the first `equalities` outputs of `expr` (as
/// `= 0`) and the rest (as `≥ 0`) inside `region`.
pub fn realize_set(
    expr: &PolyExpr,
    equalities: usize,
    region: &[Disc],
    mode: Mode,
    seed: u64,
) -> Result<RealizedSet, CompileError> {
    let m = expr.outputs.len();
    if equalities > m {
        return Err(CompileError::Unsupported(format!(
            "{equalities} equalities requested but the expression has {m} components"
        )));
    }
    if equalities < m && mode == Mode::Classical {
        return Err(CompileError::Unsupported(
            "inequalities need cabled mode".into(),
        ));
    }
    let compiled = compile(expr, region, mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = vec![0.0f64; m - equalities];
    for _ in 0..BOUND_SAMPLES {
        let z = sample_region(region, &mut rng);
        let g = expr.eval(&z);
        for (j, x) in g[equalities..].iter().enumerate() {
            if x.im.abs() > 1e-9 * (1.0 + x.norm()) {
                return Err(CompileError::Unsupported(format!(
                    "inequality {} is not real on the region (value {x} at {z:?})",
                    equalities + j + 1
                )));
            }
            max[j] = max[j].max(x.re);
        }
    }
    let b: Vec<f64> = max.iter().map(|&x| 2.0 * x.max(MIN_RADIUS)).collect();

    let outs = compiled.gadget.outputs.clone();
    let mut l = compiled.gadget.linkage.clone();
    let mut blocked = 0usize;
    let block = |l: &mut Linkage, v: &VertexId, p: C, blocked: &mut usize| -> Result<(), CompileError> {
        let id = VertexId::new(format!("$empty{}", *blocked));
        *blocked += 1;
        l.add_fixed(id.clone(), C::new(0.0, 0.0)).map_err(GadgetError::from)?;
        l.rigid(id, v.clone(), p.norm() + 1.0).map_err(GadgetError::from)?;
        Ok(())
    };
    let zero = C::new(0.0, 0.0);
    for v in &outs[..equalities] {
        match l.anchor(v) {
            Some(p) if p.norm() <= 1e-12 => {}
            Some(p) => block(&mut l, v, p, &mut blocked)?,
            None => l = l.fix_vertices(&[(v.clone(), zero)]).map_err(GadgetError::from)?,
        }
    }
    for (v, &bj) in outs[equalities..].iter().zip(&b) {
        match l.anchor(v) {
            Some(p) if p.re >= -1e-12 && p.im.abs() <= 1e-12 => {}
            Some(p) => block(&mut l, v, p, &mut blocked)?,
            None => l = l.tether(v, C::new(bj, 0.0), bj).map_err(GadgetError::from)?.0,
        }
    }
    Ok(RealizedSet {
        linkage: l,
        compiled,
        equalities,
        b,
    })
}

/// Compiled `z ↦ α(z + z̄)` whose input is driven around the circle that
/// `z + z̄` maps onto `[a, b]`.
#[derive(Clone, Debug)]
pub struct CurveTracer {
    pub compiled: CompiledLinkage,
    /// Compiled linkage plus the fixed hub and the drive bar to the input.
    pub linkage: Linkage,
    pub hub: VertexId,
    pub input: VertexId,
    pub output: VertexId,
    pub center: f64,
    pub radius: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: PolyExpr,
}

impl CurveTracer {
    /// Input position at drive angle `theta`.
    pub fn input_at(&self, theta: f64) -> C {
        C::new(self.center, 0.0) + C::from_polar(self.radius, theta)
    }
}

pub fn curve_tracer(alpha: &PolyExpr, a: f64, b: f64, mode: Mode) -> Result<CurveTracer, CompileError> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(CompileError::BadRegion(format!("need a < b, got [{a}, {b}]")));
    }
    if alpha.arity != 1 || alpha.outputs.len() != 1 {
        return Err(CompileError::Unsupported(
            "a curve needs one variable and one component".into(),
        ));
    }
    let alpha = &alpha.canonical();
    let inner = crate::expr::parse_poly("z1 + conj(z1)", 1)?;
    let g = alpha.substitute(&inner);
    let center = (b + a) / 4.0;
    let radius = (b - a) / 4.0;
    let compiled = compile(&g, &[Disc::new(C::new(center, 0.0), radius * 1.01)], mode)?;
    let input = compiled.gadget.inputs[0].clone();
    let hub = VertexId::new("$hub");
    let mut linkage = compiled.gadget.linkage.clone();
    linkage
        .add_fixed(hub.clone(), C::new(center, 0.0))
        .map_err(GadgetError::from)?;
    linkage
        .rigid(hub.clone(), input.clone(), radius)
        .map_err(GadgetError::from)?;
    Ok(CurveTracer {
        output: compiled.gadget.outputs[0].clone(),
        compiled,
        linkage,
        hub,
        input,
        center,
        radius,
        a,
        b,
        alpha: alpha.clone(),
    })
}
