use std::fmt;
use std::sync::Arc;

use super::structure::{CompiledTerm, Elem, FiniteAlgebra};
use super::syntax::{Assignment, Context, Substitution};
use crate::error::{Error, Result};

/// The finite affine space `Hom(W(X), G) ≅ G^X`, enumerated lexicographically
/// (variables in context order, first variable most significant).
#[derive(Debug, Clone)]
pub struct PointSpace {
    algebra: Arc<FiniteAlgebra>,
    context: Context,
    radices: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
    max_points: usize,
}

impl PartialEq for PointSpace {
    fn eq(&self, other: &Self) -> bool {
        self.context == other.context
            && self.radices == other.radices
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
    }
}

impl Eq for PointSpace {}

impl PointSpace {
    pub fn new(algebra: Arc<FiniteAlgebra>, context: Context, max_points: usize) -> Result<Self> {
        if context.iter().any(|(_, s)| s >= algebra.sort_count()) {
            return Err(Error::Contract("context uses an undeclared sort".into()));
        }
        let radices: Vec<usize> = context.iter().map(|(_, s)| algebra.carrier_size(s)).collect();
        let mut size: u128 = 1;
        for &r in &radices {
            size = size.saturating_mul(r as u128);
        }
        if size > max_points as u128 {
            return Err(Error::SizeLimit {
                what: "point space".into(),
                size,
                cap: max_points as u128,
            });
        }
        let mut strides = vec![1; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        Ok(PointSpace {
            algebra,
            context,
            radices,
            strides,
            len: size as usize,
            max_points,
        })
    }

    /// The cap this space was built under; derived spaces inherit it.
    pub fn max_points(&self) -> usize {
        self.max_points
    }

    /// A space over another context of the same algebra, under the same cap.
    pub fn derive(&self, context: Context) -> Result<PointSpace> {
        PointSpace::new(self.algebra.clone(), context, self.max_points)
    }

    /// A space over `algebra` with the same context, under the same cap.
    pub fn with_algebra(&self, algebra: Arc<FiniteAlgebra>) -> Result<PointSpace> {
        PointSpace::new(algebra, self.context.clone(), self.max_points)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Number of points; never zero since carriers are nonempty.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self, point: &[Elem]) -> usize {
        point.iter().zip(&self.strides).map(|(&d, &s)| d * s).sum()
    }

    pub fn decode(&self, index: usize) -> Vec<Elem> {
        let mut out = vec![0; self.radices.len()];
        self.decode_into(index, &mut out);
        out
    }

    pub fn decode_into(&self, index: usize, out: &mut [Elem]) {
        for (i, (&s, &r)) in self.strides.iter().zip(&self.radices).enumerate() {
            out[i] = (index / s) % r;
        }
    }

    pub fn digit(&self, index: usize, var: usize) -> Elem {
        (index / self.strides[var]) % self.radices[var]
    }

    /// `index` with coordinate `var` replaced by `value`.
    pub fn with_digit(&self, index: usize, var: usize, value: Elem) -> usize {
        index - self.digit(index, var) * self.strides[var] + value * self.strides[var]
    }

    pub fn assignment(&self, index: usize) -> Assignment {
        Assignment(self.decode(index))
    }

    /// Renders a point as `x=e1 y=e2`; the empty assignment renders as `()`.
    pub fn format_point(&self, index: usize) -> String {
        if self.context.is_empty() {
            return "()".to_string();
        }
        let digits = self.decode(index);
        self.context
            .iter()
            .zip(digits)
            .map(|((n, s), e)| format!("{n}={}", self.algebra.elem_name(s, e)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn iter(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.len).map(|i| self.assignment(i))
    }
}

impl fmt::Display for PointSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "G^X over [{}] ({} points)",
            self.context.display(self.algebra.signature()),
            self.len
        )
    }
}

/// All points of `G^X` in index order.
pub fn enumerate_points(alg: &Arc<FiniteAlgebra>, ctx: &Context, max_points: usize) -> Result<Vec<Assignment>> {
    let space = PointSpace::new(alg.clone(), ctx.clone(), max_points)?;
    Ok(space.iter().collect())
}

/// The map `s~`: `ν ↦ νs`, sending a point over the codomain of `s` to a point over its domain.
pub fn pull_point(s: &Substitution, nu: &Assignment, alg: &FiniteAlgebra) -> Result<Assignment> {
    if nu.0.len() != s.codomain().len() {
        return Err(Error::ContextMismatch(format!(
            "point has {} coordinates, substitution codomain has {} variables",
            nu.0.len(),
            s.codomain().len()
        )));
    }
    let puller = Puller::new(s);
    Ok(Assignment(puller.pull(alg, &nu.0)))
}

/// A substitution with its images compiled against the codomain context.
pub(crate) struct Puller {
    images: Vec<CompiledTerm>,
}

impl Puller {
    pub(crate) fn new(s: &Substitution) -> Self {
        Puller {
            images: s
                .images()
                .iter()
                .map(|t| CompiledTerm::compile(t, s.codomain()))
                .collect(),
        }
    }

    pub(crate) fn pull(&self, alg: &FiniteAlgebra, nu: &[Elem]) -> Vec<Elem> {
        self.images.iter().map(|t| t.eval(alg, nu)).collect()
    }

    pub(crate) fn pull_into(&self, alg: &FiniteAlgebra, nu: &[Elem], out: &mut [Elem]) {
        for (slot, t) in out.iter_mut().zip(&self.images) {
            *slot = t.eval(alg, nu);
        }
    }
}
