//! CSAT instances: gate DAGs over an algebra with two output gates.
//!
//! Text format (`#` starts a comment, the header line is optional):
//!
//! ```text
//! CIRCUIT v1
//! algebra a22.alg
//! inputs 2
//! g3 = p1 g1 g2
//! g4 = const 00
//! output g3 g4
//! ```
//!
//! Gates `g1..gn` are the inputs; every later gate is defined exactly once,
//! in order, from earlier gates. A product circuit names one algebra per
//! factor on its `algebra` line and writes constants as `10|01`.

use std::fmt::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CoordAlgebra, Element, ProductAlgebra, ProductElement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate<C = u32> {
    /// Input variable, 0-based.
    Input(usize),
    /// A constant; element code for plain circuits.
    Const(C),
    /// Operation index applied to earlier gates.
    Apply { op: usize, args: Vec<usize> },
}

/// One element per input gate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<Element>);

/// A circuit over a [`CoordAlgebra`].
#[derive(Debug, Clone)]
pub struct Circuit {
    algebra: Arc<CoordAlgebra>,
    algebra_path: Option<String>,
    n_inputs: usize,
    gates: Vec<Gate>,
    outputs: [usize; 2],
}

/// Gate-by-gate description before names are resolved against an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCircuit {
    pub algebra_paths: Vec<String>,
    pub n_inputs: usize,
    /// Non-input gates with their source line.
    pub gates: Vec<(usize, RawGate)>,
    pub outputs: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawGate {
    Const(String),
    Apply { op: String, args: Vec<usize> },
}

fn gate_ref(tok: &str, line: usize) -> Result<usize> {
    tok.strip_prefix('g')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .map(|n| n - 1)
        .ok_or_else(|| Error::parse(line, format!("expected a gate id like g3, found '{tok}'")))
}

impl RawCircuit {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();
        if let Some((_, "CIRCUIT v1")) = lines.peek() {
            lines.next();
        }
        let mut algebra_paths = Vec::new();
        if let Some((_, l)) = lines.peek() {
            if let Some(rest) = l.strip_prefix("algebra") {
                algebra_paths = rest.split_whitespace().map(str::to_string).collect();
                let (n, _) = lines.next().unwrap();
                if algebra_paths.is_empty() {
                    return Err(Error::parse(n, "algebra line needs a path"));
                }
            }
        }
        let (n, l) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty circuit, expected 'inputs N'"))?;
        let n_inputs = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["inputs", k] => k
                .parse::<usize>()
                .map_err(|_| Error::parse(n, format!("bad input count '{k}'")))?,
            _ => return Err(Error::parse(n, "expected 'inputs N'")),
        };
        let mut gates = Vec::new();
        let mut outputs = None;
        let mut last = n;
        for (n, l) in lines {
            last = n;
            if outputs.is_some() {
                return Err(Error::parse(n, "content after the output line"));
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.first() == Some(&"output") {
                if toks.len() != 3 {
                    return Err(Error::parse(n, "expected 'output gA gB'"));
                }
                let total = n_inputs + gates.len();
                let mut pair = [0; 2];
                for (slot, tok) in pair.iter_mut().zip(&toks[1..]) {
                    *slot = gate_ref(tok, n)?;
                    if *slot >= total {
                        return Err(Error::parse(n, format!("output gate {tok} is not defined")));
                    }
                }
                outputs = Some(pair);
                continue;
            }
            if toks.len() < 3 || toks[1] != "=" {
                return Err(Error::parse(n, "expected 'gK = OP ARGS' or 'gK = const DIGITS'"));
            }
            let id = gate_ref(toks[0], n)?;
            let expected = n_inputs + gates.len();
            if id != expected {
                return Err(Error::parse(
                    n,
                    format!("gate {} defined out of order, expected g{}", toks[0], expected + 1),
                ));
            }
            let gate = if toks[2] == "const" {
                if toks.len() != 4 {
                    return Err(Error::parse(n, "expected 'const DIGITS'"));
                }
                RawGate::Const(toks[3].to_string())
            } else {
                let args = toks[3..]
                    .iter()
                    .map(|t| {
                        let a = gate_ref(t, n)?;
                        if a >= id {
                            return Err(Error::parse(
                                n,
                                format!("{} refers to {t}, which is not defined before it", toks[0]),
                            ));
                        }
                        Ok(a)
                    })
                    .collect::<Result<_>>()?;
                RawGate::Apply {
                    op: toks[2].to_string(),
                    args,
                }
            };
            gates.push((n, gate));
        }
        let outputs = outputs.ok_or_else(|| Error::parse(last, "missing 'output gA gB' line"))?;
        Ok(RawCircuit {
            algebra_paths,
            n_inputs,
            gates,
            outputs,
        })
    }

    fn resolve<C>(
        &self,
        lookup: impl Fn(&str) -> Option<(usize, usize)>,
        constant: impl Fn(&str) -> Result<C>,
    ) -> Result<Vec<Gate<C>>> {
        let mut gates: Vec<Gate<C>> = (0..self.n_inputs).map(Gate::Input).collect();
        for (n, g) in &self.gates {
            gates.push(match g {
                RawGate::Const(s) => Gate::Const(constant(s).map_err(|e| Error::parse(*n, e.to_string()))?),
                RawGate::Apply { op, args } => {
                    let (idx, arity) =
                        lookup(op).ok_or_else(|| Error::parse(*n, format!("unknown operation '{op}'")))?;
                    if args.len() != arity {
                        return Err(Error::parse(
                            *n,
                            format!("operation {op} takes {arity} arguments, got {}", args.len()),
                        ));
                    }
                    Gate::Apply {
                        op: idx,
                        args: args.clone(),
                    }
                }
            });
        }
        Ok(gates)
    }
}

/// Parses a circuit and resolves it against `alg`.
pub fn parse_circuit(text: &str, alg: Arc<CoordAlgebra>) -> Result<Circuit> {
    let raw = RawCircuit::parse(text)?;
    let gates = raw.resolve(
        |name| alg.op_index(name).map(|i| (i, alg.op(i).arity)),
        |s| alg.parse_element(s).map(|e| alg.encode(&e)),
    )?;
    let mut c = Circuit::from_gates(alg, raw.n_inputs, gates, raw.outputs)?;
    c.algebra_path = raw.algebra_paths.first().cloned();
    Ok(c)
}

fn check_dag<C>(n_inputs: usize, gates: &[Gate<C>], outputs: [usize; 2], arity: impl Fn(usize) -> Option<usize>) -> Result<()> {
    for (i, g) in gates.iter().enumerate() {
        match g {
            Gate::Input(k) if i < n_inputs && *k == i => {}
            Gate::Input(_) => return Err(Error::usage(format!("g{} must not be an input gate", i + 1))),
            _ if i < n_inputs => return Err(Error::usage(format!("g{} must be input {}", i + 1, i + 1))),
            Gate::Const(_) => {}
            Gate::Apply { op, args } => {
                if arity(*op) != Some(args.len()) {
                    return Err(Error::usage(format!("g{}: bad operation or arity", i + 1)));
                }
                if let Some(a) = args.iter().find(|&&a| a >= i) {
                    return Err(Error::usage(format!("g{} refers to later gate g{}", i + 1, a + 1)));
                }
            }
        }
    }
    if gates.len() < n_inputs {
        return Err(Error::usage("fewer gates than inputs"));
    }
    if outputs.iter().any(|&o| o >= gates.len()) {
        return Err(Error::usage("output gate out of range"));
    }
    Ok(())
}

impl Circuit {
    /// `gates` lists every gate, inputs first (`Gate::Input(k)` at position `k`).
    pub fn from_gates(alg: Arc<CoordAlgebra>, n_inputs: usize, gates: Vec<Gate>, outputs: [usize; 2]) -> Result<Self> {
        check_dag(n_inputs, &gates, outputs, |op| (op < alg.ops().count()).then(|| alg.op(op).arity))?;
        if gates.iter().any(|g| matches!(g, Gate::Const(c) if *c >= alg.order())) {
            return Err(Error::usage("constant is not an element of the algebra"));
        }
        Ok(Circuit {
            algebra: alg,
            algebra_path: None,
            n_inputs,
            gates,
            outputs,
        })
    }

    pub fn algebra(&self) -> &Arc<CoordAlgebra> {
        &self.algebra
    }

    pub fn algebra_path(&self) -> Option<&str> {
        self.algebra_path.as_deref()
    }

    pub fn with_algebra_path(mut self, path: impl Into<String>) -> Self {
        self.algebra_path = Some(path.into());
        self
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// Total gate count `k`, inputs included.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> [usize; 2] {
        self.outputs
    }

    /// Evaluates every gate once on input codes; returns the two output codes.
    /// `scratch` is resized as needed.
    #[inline]
    pub fn eval_codes(&self, inputs: &[u32], scratch: &mut Vec<u32>) -> (u32, u32) {
        scratch.clear();
        let mut args = [0u32; 8];
        let mut spill = Vec::new();
        for g in &self.gates {
            let v = match g {
                Gate::Input(k) => inputs[*k],
                Gate::Const(c) => *c,
                Gate::Apply { op, args: ids } => {
                    if ids.len() <= args.len() {
                        for (slot, &id) in args.iter_mut().zip(ids) {
                            *slot = scratch[id];
                        }
                        self.algebra.apply_codes(*op, &args[..ids.len()])
                    } else {
                        spill.clear();
                        spill.extend(ids.iter().map(|&id| scratch[id]));
                        self.algebra.apply_codes(*op, &spill)
                    }
                }
            };
            scratch.push(v);
        }
        (scratch[self.outputs[0]], scratch[self.outputs[1]])
    }

    fn input_codes(&self, a: &Assignment) -> Result<Vec<u32>> {
        if a.0.len() != self.n_inputs {
            return Err(Error::usage(format!(
                "assignment has {} values, circuit has {} inputs",
                a.0.len(),
                self.n_inputs
            )));
        }
        a.0.iter()
            .map(|e| {
                self.algebra
                    .element(e.coords().to_vec())
                    .map(|e| self.algebra.encode(&e))
                    .map_err(|e| Error::usage(e.to_string()))
            })
            .collect()
    }

    pub fn eval(&self, a: &Assignment) -> Result<(Element, Element)> {
        let codes = self.input_codes(a)?;
        let (x, y) = self.eval_codes(&codes, &mut Vec::with_capacity(self.size()));
        Ok((self.algebra.decode(x), self.algebra.decode(y)))
    }

    /// True iff both outputs agree.
    pub fn check(&self, a: &Assignment) -> Result<bool> {
        let (x, y) = self.eval(a)?;
        Ok(x == y)
    }

    /// Input codes from a coordinate vector in `F_q^{n·h}`, variable-major.
    pub fn codes_from_coords(&self, coords: &[u32], out: &mut [u32]) {
        let q = self.algebra.q();
        let h = self.algebra.h();
        for (slot, chunk) in out.iter_mut().zip(coords.chunks(h)) {
            *slot = chunk.iter().fold(0, |acc, &c| acc * q + c);
        }
    }

    pub fn assignment_from_codes(&self, codes: &[u32]) -> Assignment {
        Assignment(codes.iter().map(|&c| self.algebra.decode(c)).collect())
    }

    pub fn format_assignment(&self, a: &Assignment) -> Vec<String> {
        a.0.iter().map(|e| self.algebra.format_element(e)).collect()
    }

    /// Canonical text; [`parse_circuit`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let alg = &self.algebra;
        print_gates(
            self.algebra_path.iter().cloned().collect(),
            self.n_inputs,
            &self.gates,
            self.outputs,
            |op| alg.op(op).name.clone(),
            |c| alg.format_element(&alg.decode(*c)),
        )
    }
}

fn print_gates<C>(
    paths: Vec<String>,
    n_inputs: usize,
    gates: &[Gate<C>],
    outputs: [usize; 2],
    op_name: impl Fn(usize) -> String,
    constant: impl Fn(&C) -> String,
) -> String {
    let mut out = String::from("CIRCUIT v1\n");
    if !paths.is_empty() {
        writeln!(out, "algebra {}", paths.join(" ")).unwrap();
    }
    writeln!(out, "inputs {n_inputs}").unwrap();
    for (i, g) in gates.iter().enumerate().skip(n_inputs) {
        match g {
            Gate::Input(_) => unreachable!("inputs come first"),
            Gate::Const(c) => writeln!(out, "g{} = const {}", i + 1, constant(c)).unwrap(),
            Gate::Apply { op, args } => {
                write!(out, "g{} = {}", i + 1, op_name(*op)).unwrap();
                for a in args {
                    write!(out, " g{}", a + 1).unwrap();
                }
                out.push('\n');
            }
        }
    }
    writeln!(out, "output g{} g{}", outputs[0] + 1, outputs[1] + 1).unwrap();
    out
}

impl std::fmt::Display for Circuit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Shared generator: each non-input gate picks uniformly among the operations
// and "constant"; operands are uniform among earlier gates.
fn random_gates<C>(
    rng: &mut ChaCha8Rng,
    n_inputs: usize,
    n_gates: usize,
    arities: &[usize],
    mut constant: impl FnMut(&mut ChaCha8Rng) -> C,
) -> (Vec<Gate<C>>, [usize; 2]) {
    let mut gates: Vec<Gate<C>> = (0..n_inputs).map(Gate::Input).collect();
    while gates.len() < n_gates {
        let i = gates.len();
        let pick = rng.random_range(0..=arities.len());
        if pick == arities.len() || i == 0 {
            let c = constant(rng);
            gates.push(Gate::Const(c));
        } else {
            let args = (0..arities[pick]).map(|_| rng.random_range(0..i)).collect();
            gates.push(Gate::Apply { op: pick, args });
        }
    }
    let outputs = [rng.random_range(0..n_gates), rng.random_range(0..n_gates)];
    (gates, outputs)
}

/// A reproducible random circuit with `n_gates` gates in total.
pub fn random_circuit(alg: Arc<CoordAlgebra>, n_inputs: usize, n_gates: usize, seed: u64) -> Result<Circuit> {
    if n_gates < n_inputs + 2 {
        return Err(Error::usage("n_gates must be at least n_inputs + 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arities: Vec<usize> = alg.ops().map(|o| o.arity).collect();
    let order = alg.order();
    let (gates, outputs) = random_gates(&mut rng, n_inputs, n_gates, &arities, |r| r.random_range(0..order));
    Circuit::from_gates(alg, n_inputs, gates, outputs)
}

/// A circuit over a direct product; constants are product elements.
#[derive(Debug, Clone)]
pub struct ProductCircuit {
    algebra: Arc<ProductAlgebra>,
    n_inputs: usize,
    gates: Vec<Gate<ProductElement>>,
    outputs: [usize; 2],
}

pub type ProductAssignment = Vec<ProductElement>;

impl ProductCircuit {
    pub fn from_gates(
        alg: Arc<ProductAlgebra>,
        n_inputs: usize,
        gates: Vec<Gate<ProductElement>>,
        outputs: [usize; 2],
    ) -> Result<Self> {
        check_dag(n_inputs, &gates, outputs, |op| alg.signature().get(op).map(|s| s.1))?;
        Ok(ProductCircuit {
            algebra: alg,
            n_inputs,
            gates,
            outputs,
        })
    }

    pub fn algebra(&self) -> &Arc<ProductAlgebra> {
        &self.algebra
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate<ProductElement>] {
        &self.gates
    }

    pub fn outputs(&self) -> [usize; 2] {
        self.outputs
    }

    /// The same circuit read in factor `f`.
    pub fn project(&self, f: usize) -> Result<Circuit> {
        let fac = self.algebra.factor(f).clone();
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Input(k) => Gate::Input(*k),
                Gate::Const(c) => Gate::Const(fac.encode(self.algebra.project(c, f))),
                Gate::Apply { op, args } => Gate::Apply {
                    op: self.algebra.factor_op(f, *op),
                    args: args.clone(),
                },
            })
            .collect();
        Circuit::from_gates(fac, self.n_inputs, gates, self.outputs)
    }

    /// Direct evaluation in the product, without projecting.
    pub fn eval(&self, a: &[ProductElement]) -> Result<(ProductElement, ProductElement)> {
        if a.len() != self.n_inputs {
            return Err(Error::usage("assignment length does not match the inputs"));
        }
        let mut vals: Vec<ProductElement> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Input(k) => a[*k].clone(),
                Gate::Const(c) => c.clone(),
                Gate::Apply { op, args } => {
                    let xs: Vec<ProductElement> = args.iter().map(|&i| vals[i].clone()).collect();
                    self.algebra.apply(*op, &xs)?
                }
            };
            vals.push(v);
        }
        Ok((vals[self.outputs[0]].clone(), vals[self.outputs[1]].clone()))
    }

    pub fn check(&self, a: &[ProductElement]) -> Result<bool> {
        let (x, y) = self.eval(a)?;
        Ok(x == y)
    }

    pub fn to_text(&self, paths: &[String]) -> String {
        let alg = &self.algebra;
        print_gates(
            paths.to_vec(),
            self.n_inputs,
            &self.gates,
            self.outputs,
            |op| alg.signature()[op].0.clone(),
            |c| alg.format_element(c),
        )
    }
}

pub fn parse_product_circuit(text: &str, alg: Arc<ProductAlgebra>) -> Result<ProductCircuit> {
    let raw = RawCircuit::parse(text)?;
    let gates = raw.resolve(
        |name| alg.op_index(name).map(|i| (i, alg.signature()[i].1)),
        |s| alg.parse_element(s),
    )?;
    ProductCircuit::from_gates(alg, raw.n_inputs, gates, raw.outputs)
}

pub fn random_product_circuit(
    alg: Arc<ProductAlgebra>,
    n_inputs: usize,
    n_gates: usize,
    seed: u64,
) -> Result<ProductCircuit> {
    if n_gates < n_inputs + 2 {
        return Err(Error::usage("n_gates must be at least n_inputs + 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arities: Vec<usize> = alg.signature().iter().map(|s| s.1).collect();
    let order = alg.order();
    let prod = alg.clone();
    let (gates, outputs) = random_gates(&mut rng, n_inputs, n_gates, &arities, |r| {
        prod.decode(r.random_range(0..order))
    });
    ProductCircuit::from_gates(alg, n_inputs, gates, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_example, direct_product};

    fn a22() -> Arc<CoordAlgebra> {
        Arc::new(build_example(2, 2, 2).unwrap())
    }

    fn asg(c: &Circuit, xs: &[&str]) -> Assignment {
        Assignment(xs.iter().map(|s| c.algebra().parse_element(s).unwrap()).collect())
    }

    const EXAMPLE: &str = "CIRCUIT v1
algebra examples/a22.alg
inputs 2
g3 = p1 g1 g2
g4 = const 00
output g3 g4
";

    #[test]
    fn parse_example() {
        let c = parse_circuit(EXAMPLE, a22()).unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(c.algebra_path(), Some("examples/a22.alg"));
        assert_eq!(c.to_text(), EXAMPLE);
        let short = parse_circuit("inputs 2\ng3 = p1 g1 g2\ng4 = const 00\noutput g3 g4\n", a22()).unwrap();
        assert_eq!(short.size(), 4);
    }

    #[test]
    fn parse_errors() {
        let err = parse_circuit("inputs 2\noutput g9 g1\n", a22()).unwrap_err();
        assert!(err.to_string().contains("g9"), "{err}");
        for bad in [
            "inputs 2\ng4 = p1 g1 g2\noutput g1 g1\n",
            "inputs 2\ng3 = p1 g1 g3\noutput g1 g1\n",
            "inputs 2\ng3 = q9 g1 g2\noutput g1 g1\n",
            "inputs 2\ng3 = p1 g1\noutput g1 g1\n",
            "inputs 2\ng3 = const 2\noutput g1 g1\n",
            "inputs 2\ng3 = p1 g1 g2\n",
            "inputs x\n",
            "",
        ] {
            assert!(parse_circuit(bad, a22()).is_err(), "{bad:?}");
        }
        match parse_circuit("inputs 2\n\n# c\ng3 = p1 g1 g7\noutput g3 g3\n", a22()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eval_and_check() {
        let c = parse_circuit(EXAMPLE, a22()).unwrap();
        let a = c.algebra().clone();
        let (x, y) = c.eval(&asg(&c, &["01", "01"])).unwrap();
        assert_eq!((a.format_element(&x), a.format_element(&y)), ("10".into(), "00".into()));
        let (x, _) = c.eval(&asg(&c, &["00", "01"])).unwrap();
        assert!(x.is_zero());
        assert!(!c.check(&asg(&c, &["01", "01"])).unwrap());
        assert!(c.check(&asg(&c, &["00", "00"])).unwrap());
        assert!(c.check(&asg(&c, &["01"])).is_err());

        let id = parse_circuit("inputs 1\noutput g1 g1\n", a22()).unwrap();
        for e in a.elements() {
            assert!(id.check(&Assignment(vec![e])).unwrap());
        }
    }

    #[test]
    fn random_is_reproducible_and_valid() {
        let a = a22();
        let x = random_circuit(a.clone(), 2, 8, 1).unwrap();
        let y = random_circuit(a.clone(), 2, 8, 1).unwrap();
        assert_eq!(x.to_text(), y.to_text());
        assert_eq!(x.size(), 8);
        assert!(random_circuit(a.clone(), 2, 3, 1).is_err());
        for seed in 0..50 {
            let c = random_circuit(a.clone(), 2, 8, seed).unwrap();
            let back = parse_circuit(&c.to_text(), a.clone()).unwrap();
            assert_eq!(back.to_text(), c.to_text());
        }
    }

    #[test]
    fn product_projection_and_eval_agree() {
        let a = a22();
        let p = Arc::new(direct_product(a.clone(), a.clone()).unwrap());
        for seed in 0..20 {
            let pc = random_product_circuit(p.clone(), 2, 7, seed).unwrap();
            let parts = [pc.project(0).unwrap(), pc.project(1).unwrap()];
            for x in 0..p.order() {
                for y in 0..p.order() {
                    let args = vec![p.decode(x), p.decode(y)];
                    let (u, v) = pc.eval(&args).unwrap();
                    for (f, part) in parts.iter().enumerate() {
                        let fa = Assignment(args.iter().map(|e| e.0[f].clone()).collect());
                        let (pu, pv) = part.eval(&fa).unwrap();
                        assert_eq!((&pu, &pv), (&u.0[f], &v.0[f]));
                    }
                }
            }
            let paths = vec!["a.alg".to_string(), "a.alg".to_string()];
            let back = parse_product_circuit(&pc.to_text(&paths), p.clone()).unwrap();
            assert_eq!(back.to_text(&paths), pc.to_text(&paths));
        }
    }
}
