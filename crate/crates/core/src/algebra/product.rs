use std::sync::Arc;

use super::{CoordAlgebra, Element};
use crate::error::{Error, Result};

/// Direct product of algebras sharing one signature; the factors may have
/// different primes, so this is not itself a [`CoordAlgebra`].
#[derive(Debug, Clone)]
pub struct ProductAlgebra {
    factors: Vec<Arc<CoordAlgebra>>,
    ops: Vec<(String, usize)>,
    // op_map[f][i]: index in factor f of product operation i
    op_map: Vec<Vec<usize>>,
}

/// One component per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductElement(pub Vec<Element>);

pub fn direct_product(a: Arc<CoordAlgebra>, b: Arc<CoordAlgebra>) -> Result<ProductAlgebra> {
    ProductAlgebra::new(vec![a, b])
}

impl ProductAlgebra {
    pub fn new(factors: Vec<Arc<CoordAlgebra>>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::usage("a product needs at least one factor"))?;
        let ops: Vec<(String, usize)> = first.ops().map(|o| (o.name.clone(), o.arity)).collect();
        let mut op_map = Vec::with_capacity(factors.len());
        for (fi, fac) in factors.iter().enumerate() {
            if fac.ops().count() != ops.len() {
                return Err(Error::usage(format!(
                    "factor {} has a different signature",
                    fi + 1
                )));
            }
            let mut map = Vec::with_capacity(ops.len());
            for (name, arity) in &ops {
                match fac.op_index(name) {
                    Some(i) if fac.op(i).arity == *arity => map.push(i),
                    _ => {
                        return Err(Error::usage(format!(
                            "factor {} lacks operation {name}/{arity}",
                            fi + 1
                        )))
                    }
                }
            }
            op_map.push(map);
        }
        Ok(ProductAlgebra {
            factors,
            ops,
            op_map,
        })
    }

    pub fn factors(&self) -> &[Arc<CoordAlgebra>] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &Arc<CoordAlgebra> {
        &self.factors[i]
    }

    /// Operation names and arities, in the first factor's order.
    pub fn signature(&self) -> &[(String, usize)] {
        &self.ops
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|(n, _)| n == name)
    }

    /// Index of product operation `op` inside factor `factor`.
    pub fn factor_op(&self, factor: usize, op: usize) -> usize {
        self.op_map[factor][op]
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.order() as u64).product()
    }

    pub fn project<'a>(&self, e: &'a ProductElement, factor: usize) -> &'a Element {
        &e.0[factor]
    }

    pub fn zero(&self) -> ProductElement {
        ProductElement(self.factors.iter().map(|f| f.zero()).collect())
    }

    /// Componentwise application in every factor.
    pub fn apply(&self, op: usize, args: &[ProductElement]) -> Result<ProductElement> {
        let (name, arity) = self
            .ops
            .get(op)
            .ok_or_else(|| Error::usage(format!("unknown operation index {op}")))?;
        if args.len() != *arity {
            return Err(Error::usage(format!(
                "operation {name} takes {arity} arguments, got {}",
                args.len()
            )));
        }
        let mut out = Vec::with_capacity(self.factors.len());
        for (fi, fac) in self.factors.iter().enumerate() {
            let codes: Vec<u32> = args.iter().map(|a| fac.encode(&a.0[fi])).collect();
            out.push(fac.decode(fac.apply_codes(self.op_map[fi][op], &codes)));
        }
        Ok(ProductElement(out))
    }

    /// Digit strings of the components joined by `|`.
    pub fn format_element(&self, e: &ProductElement) -> String {
        self.factors
            .iter()
            .zip(&e.0)
            .map(|(f, x)| f.format_element(x))
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn parse_element(&self, s: &str) -> Result<ProductElement> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != self.factors.len() {
            return Err(Error::Format(format!(
                "product element '{s}' needs {} components",
                self.factors.len()
            )));
        }
        Ok(ProductElement(
            self.factors
                .iter()
                .zip(parts)
                .map(|(f, p)| f.parse_element(p))
                .collect::<Result<_>>()?,
        ))
    }

    /// Mixed-radix decoding over the factors' codes, first factor most significant.
    pub fn decode(&self, mut code: u64) -> ProductElement {
        let mut parts = vec![Element::zero(0); self.factors.len()];
        for (slot, f) in parts.iter_mut().zip(&self.factors).rev() {
            let order = f.order() as u64;
            *slot = f.decode((code % order) as u32);
            code /= order;
        }
        ProductElement(parts)
    }
}
