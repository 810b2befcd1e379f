//! Bounded complexes of free modules, Koszul complexes, and their
//! (co)homology with coefficients in a presented module.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fpmodules::{homology_witness, validate_homology_witness, Matrix, ModulePresentation};
use crate::groebner::RingPresentation;
use crate::poly::Polynomial;

/// `0 -> F_n -> ... -> F_0 -> 0` with `d_p: F_p -> F_{p-1}`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    ring: RingPresentation,
    ranks: Vec<usize>,
    differentials: Vec<Matrix>,
}

impl FreeComplex {
    /// `differentials[p - 1]` is `d_p`, of shape `ranks[p-1] x ranks[p]`.
    /// Fails unless shapes match and `d_{p-1} d_p = 0`.
    pub fn new(ring: &RingPresentation, ranks: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self> {
        if differentials.len() + 1 != ranks.len() {
            return Err(Error::DimensionMismatch { expected: ranks.len().saturating_sub(1), found: differentials.len() });
        }
        for (p, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[p] || d.cols() != ranks[p + 1] {
                return Err(Error::DimensionMismatch { expected: ranks[p] * ranks[p + 1], found: d.rows() * d.cols() });
            }
        }
        for w in differentials.windows(2) {
            if !w[0].mul(&w[1], ring)?.is_zero_mod(ring) {
                return Err(Error::PreconditionViolation("consecutive differentials do not compose to zero".into()));
            }
        }
        Ok(FreeComplex { ring: ring.clone(), ranks, differentials })
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Top degree `n`.
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `d_p` for `1 <= p <= n`.
    pub fn differential(&self, p: usize) -> Option<&Matrix> {
        if p == 0 {
            None
        } else {
            self.differentials.get(p - 1)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ranks": self.ranks,
            "differentials": self.differentials.iter().map(matrix_json).collect::<Vec<_>>(),
        })
    }
}

pub fn matrix_json(m: &Matrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}

/// All `p`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `K(x)` with `d_p(e_a) = sum_j (-1)^(j+1) x_{a_j} e_{a - a_j}`.
pub fn koszul_complex(xs: &[Polynomial], ring: &RingPresentation) -> Result<FreeComplex> {
    if xs.is_empty() {
        return Err(Error::invalid("Koszul complex of an empty sequence"));
    }
    let xs: Vec<Polynomial> = xs
        .iter()
        .map(|x| {
            ring.check_poly(x)?;
            Ok(ring.reduce(x))
        })
        .collect::<Result<_>>()?;
    let n = xs.len();
    let bases: Vec<Vec<Vec<usize>>> = (0..=n).map(|p| subsets(n, p)).collect();
    let mut differentials = Vec::with_capacity(n);
    for p in 1..=n {
        let (rows, cols) = (&bases[p - 1], &bases[p]);
        let mut entries = vec![ring.zero(); rows.len() * cols.len()];
        for (c, alpha) in cols.iter().enumerate() {
            for (j, &i) in alpha.iter().enumerate() {
                let face: Vec<usize> = alpha.iter().copied().filter(|&k| k != i).collect();
                let r = rows.binary_search(&face).expect("faces are (p-1)-subsets");
                // j is 0-based, so (-1)^(j+1) with 1-based j is (-1)^j here
                entries[r * cols.len() + c] = if j % 2 == 0 { xs[i].clone() } else { xs[i].neg() };
            }
        }
        differentials.push(Matrix::new(rows.len(), cols.len(), entries)?);
    }
    FreeComplex::new(ring, bases.iter().map(|b| b.len()).collect(), differentials)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    /// `K(x) (x) M`, differentials lower the degree.
    Chain,
    /// `Hom(K(x), M)`, differentials raise the degree.
    Cochain,
}

/// A free complex with every `F_p` replaced by `F_p (x) M` or `Hom(F_p, M)`.
#[derive(Clone, Debug)]
pub struct ComplexWithCoefficients {
    complex: FreeComplex,
    module: ModulePresentation,
    variance: Variance,
}

#[derive(Clone, Debug)]
pub struct CohomologyVerdict {
    pub degree: usize,
    pub vanishes: bool,
    /// An element of `M^{rank}` in the kernel but not the image.
    pub witness: Option<Vec<Polynomial>>,
}

impl ComplexWithCoefficients {
    pub fn new(complex: FreeComplex, module: &ModulePresentation, variance: Variance) -> Result<Self> {
        complex.ring.check_same(module.ring(), "complex coefficients")?;
        Ok(ComplexWithCoefficients { complex, module: module.clone(), variance })
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn module(&self) -> &ModulePresentation {
        &self.module
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn length(&self) -> usize {
        self.complex.length()
    }

    /// Maps into and out of degree `p`, as `R`-matrices acting on copies of `M`.
    fn maps_at(&self, p: usize) -> (Option<Matrix>, Option<Matrix>) {
        let c = &self.complex;
        match self.variance {
            Variance::Cochain => {
                let incoming = c.differential(p).map(|d| d.transpose());
                let outgoing = c.differential(p + 1).map(|d| d.transpose());
                (incoming, outgoing)
            }
            Variance::Chain => (c.differential(p + 1).cloned(), c.differential(p).cloned()),
        }
    }

    /// Decides whether the (co)homology at degree `p` vanishes.
    pub fn cohomology(&self, p: usize) -> Result<CohomologyVerdict> {
        if p > self.length() {
            return Err(Error::IndexOutOfRange { index: p, max: self.length() });
        }
        let (incoming, outgoing) = self.maps_at(p);
        let witness = homology_witness(&self.module, incoming.as_ref(), outgoing.as_ref(), self.complex.ranks[p])?;
        Ok(CohomologyVerdict { degree: p, vanishes: witness.is_none(), witness })
    }

    /// Re-checks a witness: it must be a cycle and not a boundary.
    pub fn validate_witness(&self, p: usize, w: &[Polynomial]) -> Result<bool> {
        if p > self.length() {
            return Err(Error::IndexOutOfRange { index: p, max: self.length() });
        }
        let (incoming, outgoing) = self.maps_at(p);
        validate_homology_witness(&self.module, incoming.as_ref(), outgoing.as_ref(), self.complex.ranks[p], w)
    }
}

/// `Hom(K(x), M)`: degree `p` is `M^{C(n,p)}`, `δ^p = d_{p+1}^T`.
pub fn koszul_cochain(xs: &[Polynomial], m: &ModulePresentation) -> Result<ComplexWithCoefficients> {
    ComplexWithCoefficients::new(koszul_complex(xs, m.ring())?, m, Variance::Cochain)
}

/// `K(x) (x) M`.
pub fn koszul_chain(xs: &[Polynomial], m: &ModulePresentation) -> Result<ComplexWithCoefficients> {
    ComplexWithCoefficients::new(koszul_complex(xs, m.ring())?, m, Variance::Chain)
}

pub fn cohomology_vanishes(c: &ComplexWithCoefficients, p: usize) -> Result<CohomologyVerdict> {
    c.cohomology(p)
}
