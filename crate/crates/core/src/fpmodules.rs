//! Finitely presented modules `R^r / N` over a presented ring, with
//! syzygies, free resolutions, Ext vanishing, annihilators and torsion.
//!
//! Module elements are coordinate vectors in `R^r`. Every submodule
//! computation adjoins `K * e_c` in each coordinate, so work happens in
//! the ambient polynomial ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::engine::{Ctx, Vector};
use crate::groebner::{ideal_power, IdealSpec, RingPresentation};
use crate::poly::Polynomial;

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        write!(f, "matrix {} {} [{}]", self.rows, self.cols, e.join(", "))
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zero(ring: &RingPresentation, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &RingPresentation, n: usize) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix from its columns.
    pub fn from_columns(ring: &RingPresentation, rows: usize, columns: &[Vec<Polynomial>]) -> Self {
        let mut m = Matrix::zero(ring, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, p) in c.iter().enumerate() {
                m.entries[i * m.cols + j] = p.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Polynomial>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &Matrix, ring: &RingPresentation) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut m = Matrix::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = &acc + &(a * other.get(k, j));
                    }
                }
                m.entries[i * other.cols + j] = ring.reduce(&acc);
            }
        }
        Ok(m)
    }

    /// Image of a column vector.
    pub fn apply(&self, v: &[Polynomial], ring: &RingPresentation) -> Vec<Polynomial> {
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = &acc + &(self.get(i, k) * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero_mod(&self, ring: &RingPresentation) -> bool {
        self.entries.iter().all(|p| ring.reduce(p).is_zero())
    }

    fn reduced(&self, ring: &RingPresentation) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|p| ring.reduce(p)).collect() }
    }

    fn check_ring(&self, ring: &RingPresentation) -> Result<()> {
        self.entries.iter().try_for_each(|p| ring.check_poly(p))
    }
}

/// A submodule of `R^rank` together with `K R^rank`, held as a Gröbner basis.
pub(crate) struct Span {
    ring: RingPresentation,
    rank: usize,
    basis: Vec<Vector>,
}

impl Span {
    pub fn new(ring: &RingPresentation, rank: usize, gens: &[Vec<Polynomial>]) -> Result<Span> {
        let ctx = Ctx::pot(ring.ambient());
        let mut vs = ring.relation_vectors(&ctx, 0..rank);
        vs.extend(gens.iter().map(|g| ctx.vector_from_column(g, 0)));
        let basis = ctx.groebner(vs, &ring.budget())?;
        Ok(Span { ring: ring.clone(), rank, basis })
    }

    pub fn reduce(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        let ctx = Ctx::pot(self.ring.ambient());
        ctx.components(&ctx.reduce(ctx.vector_from_column(v, 0), &self.basis), self.rank)
    }

    pub fn contains(&self, v: &[Polynomial]) -> bool {
        self.reduce(v).iter().all(|p| p.is_zero())
    }

    pub fn is_everything(&self) -> bool {
        (0..self.rank).all(|i| self.contains(&unit_vector(&self.ring, self.rank, i)))
    }

    pub fn same_as(&self, other: &Span) -> bool {
        self.rank == other.rank && self.basis == other.basis
    }
}

pub(crate) fn unit_vector(ring: &RingPresentation, rank: usize, i: usize) -> Vec<Polynomial> {
    let mut v = vec![ring.zero(); rank];
    v[i] = ring.one();
    v
}

/// Generators of `{a in R^s : sum a_j columns[j] in span(modulo) + K R^r}`,
/// each reduced modulo `K`, from the graph module under position over term.
pub(crate) fn syzygies(
    ring: &RingPresentation,
    target_rank: usize,
    columns: &[Vec<Polynomial>],
    modulo: &[Vec<Polynomial>],
) -> Result<Vec<Vec<Polynomial>>> {
    let r = target_rank;
    let s = columns.len();
    if s == 0 {
        return Ok(Vec::new());
    }
    let ctx = Ctx::pot(ring.ambient());
    let mut gens = ring.relation_vectors(&ctx, 0..r + s);
    for (j, c) in columns.iter().enumerate() {
        let mut entries: Vec<(usize, Polynomial)> = c.iter().cloned().enumerate().collect();
        entries.push((r + j, ring.one()));
        gens.push(ctx.vector(entries));
    }
    gens.extend(modulo.iter().map(|n| ctx.vector_from_column(n, 0)));
    let basis = ctx.groebner(gens, &ring.budget())?;
    let mut out = Vec::new();
    for v in &basis {
        if v.lead().is_some_and(|t| t.comp >= r) {
            let a: Vec<Polynomial> = ctx.components(v, r + s).split_off(r).iter().map(|p| ring.reduce(p)).collect();
            if a.iter().any(|p| !p.is_zero()) {
                out.push(a);
            }
        }
    }
    Ok(out)
}

/// Drops generators lying in the span of lower-degree generators (plus
/// `modulo`), one degree at a time.
pub(crate) fn prune(
    ring: &RingPresentation,
    rank: usize,
    gens: Vec<Vec<Polynomial>>,
    modulo: &[Vec<Polynomial>],
) -> Result<Vec<Vec<Polynomial>>> {
    let degree = |v: &Vec<Polynomial>| v.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    let mut gens: Vec<(u32, usize, Vec<Polynomial>)> = gens.into_iter().enumerate().map(|(i, g)| (degree(&g), i, g)).collect();
    gens.sort_by_key(|(d, i, _)| (*d, *i));
    let mut kept: Vec<(usize, Vec<Polynomial>)> = Vec::new();
    let mut start = 0;
    while start < gens.len() {
        let d = gens[start].0;
        let end = start + gens[start..].iter().take_while(|g| g.0 == d).count();
        let mut all = modulo.to_vec();
        all.extend(kept.iter().map(|(_, g)| g.clone()));
        let span = Span::new(ring, rank, &all)?;
        for (_, i, g) in &gens[start..end] {
            if !span.contains(g) {
                kept.push((*i, g.clone()));
            }
        }
        start = end;
    }
    kept.sort_by_key(|(i, _)| *i);
    Ok(kept.into_iter().map(|(_, g)| g).collect())
}

/// The cokernel of a relation matrix: `R^rank / (columns)`.
#[derive(Clone)]
pub struct ModulePresentation {
    ring: RingPresentation,
    relations: Matrix,
}

impl fmt::Debug for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coker {}", self.relations)
    }
}

impl ModulePresentation {
    /// `relations` has one row per generator and one column per relation.
    pub fn new(ring: &RingPresentation, relations: Matrix) -> Result<Self> {
        relations.check_ring(ring)?;
        Ok(ModulePresentation { ring: ring.clone(), relations: relations.reduced(ring) })
    }

    pub fn free(ring: &RingPresentation, rank: usize) -> Self {
        ModulePresentation { ring: ring.clone(), relations: Matrix::zero(ring, rank, 0) }
    }

    pub fn zero(ring: &RingPresentation) -> Self {
        ModulePresentation::free(ring, 0)
    }

    /// `R/I`.
    pub fn cyclic(ideal: &IdealSpec) -> Self {
        let ring = ideal.ring();
        let cols: Vec<Vec<Polynomial>> = ideal.generators().iter().map(|g| vec![g.clone()]).collect();
        ModulePresentation { ring: ring.clone(), relations: Matrix::from_columns(ring, 1, &cols) }
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.relations.rows
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn relation_columns(&self) -> Vec<Vec<Polynomial>> {
        self.relations.columns()
    }

    pub fn is_free(&self) -> bool {
        self.relations.entries.iter().all(|p| p.is_zero())
    }

    pub(crate) fn span(&self) -> Result<Span> {
        Span::new(&self.ring, self.rank(), &self.relation_columns())
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.span()?.is_everything())
    }

    /// Whether `v` is zero in the module.
    pub fn element_is_zero(&self, v: &[Polynomial]) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.span()?.contains(v))
    }

    pub(crate) fn check_vector(&self, v: &[Polynomial]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        v.iter().try_for_each(|p| self.ring.check_poly(p))
    }

    /// `M/IM`.
    pub fn quotient_by_ideal(&self, ideal: &IdealSpec) -> Result<ModulePresentation> {
        self.ring.check_same(ideal.ring(), "module quotient")?;
        quotient_by_sequence(self, ideal.generators())
    }
}

/// A homomorphism between presented modules, given on generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: ModulePresentation,
    target: ModulePresentation,
    matrix: Matrix,
}

impl ModuleMap {
    /// `matrix` is `target.rank x source.rank`; rejects maps that do not
    /// carry source relations into target relations.
    pub fn new(source: ModulePresentation, target: ModulePresentation, matrix: Matrix) -> Result<Self> {
        source.ring.check_same(&target.ring, "module map")?;
        if matrix.rows != target.rank() || matrix.cols != source.rank() {
            return Err(Error::DimensionMismatch { expected: target.rank() * source.rank(), found: matrix.rows * matrix.cols });
        }
        matrix.check_ring(&source.ring)?;
        let span = target.span()?;
        for col in source.relation_columns() {
            if !span.contains(&matrix.apply(&col, &source.ring)) {
                return Err(Error::PreconditionViolation("map does not respect the source relations".into()));
            }
        }
        let matrix = matrix.reduced(&source.ring);
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn source(&self) -> &ModulePresentation {
        &self.source
    }

    pub fn target(&self) -> &ModulePresentation {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// A submodule of a presented module `M`, by generators in `R^rank M`.
#[derive(Clone, Debug)]
pub struct EmbeddedSubmodule {
    ambient: ModulePresentation,
    generators: Vec<Vec<Polynomial>>,
}

impl EmbeddedSubmodule {
    pub fn new(ambient: &ModulePresentation, generators: Vec<Vec<Polynomial>>) -> Result<Self> {
        for g in &generators {
            ambient.check_vector(g)?;
        }
        Ok(EmbeddedSubmodule { ambient: ambient.clone(), generators })
    }

    pub fn ambient(&self) -> &ModulePresentation {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<Polynomial>] {
        &self.generators
    }

    fn span(&self) -> Result<Span> {
        let mut gens = self.ambient.relation_columns();
        gens.extend(self.generators.iter().cloned());
        Span::new(&self.ambient.ring, self.ambient.rank(), &gens)
    }

    /// Generators that are nonzero in the ambient module.
    pub fn nonzero_generators(&self) -> Result<Vec<Vec<Polynomial>>> {
        let span = self.ambient.span()?;
        Ok(self.generators.iter().filter(|g| !span.contains(g)).cloned().collect())
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.nonzero_generators()?.is_empty())
    }

    pub fn contains(&self, v: &[Polynomial]) -> Result<bool> {
        self.ambient.check_vector(v)?;
        Ok(self.span()?.contains(v))
    }

    /// Equality of images inside the common ambient module.
    pub fn equals(&self, other: &EmbeddedSubmodule) -> Result<bool> {
        self.ambient.ring.check_same(&other.ambient.ring, "submodule comparison")?;
        if self.ambient.rank() != other.ambient.rank() {
            return Ok(false);
        }
        Ok(self.span()?.same_as(&other.span()?))
    }

    /// The submodule as a module in its own right: `R^g / syz`.
    pub fn presentation(&self) -> Result<ModulePresentation> {
        let ring = &self.ambient.ring;
        let syz = syzygies(ring, self.ambient.rank(), &self.generators, &self.ambient.relation_columns())?;
        ModulePresentation::new(ring, Matrix::from_columns(ring, self.generators.len(), &syz))
    }
}

/// Kernel of a map as a submodule of its source.
pub fn kernel_map(f: &ModuleMap) -> Result<EmbeddedSubmodule> {
    let ring = &f.source.ring;
    let syz = syzygies(ring, f.target.rank(), &f.matrix.columns(), &f.target.relation_columns())?;
    EmbeddedSubmodule::new(&f.source, syz)
}

/// Free resolution `... -> F_1 -> F_0 -> M -> 0`, as far as computed.
#[derive(Clone, Debug)]
pub struct FreeResolutionPrefix {
    module: ModulePresentation,
    /// `differentials[i]` is `d_{i+1}: F_{i+1} -> F_i`.
    differentials: Vec<Matrix>,
}

impl FreeResolutionPrefix {
    pub fn new(module: &ModulePresentation) -> Self {
        FreeResolutionPrefix { module: module.clone(), differentials: vec![module.relations.clone()] }
    }

    pub fn module(&self) -> &ModulePresentation {
        &self.module
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// Rank of `F_i`.
    pub fn rank(&self, i: usize) -> usize {
        if i == 0 {
            self.module.rank()
        } else {
            self.differentials[i - 1].cols
        }
    }

    /// Computes differentials until `length` are available.
    pub fn extend_to(&mut self, length: usize) -> Result<()> {
        let ring = self.module.ring.clone();
        while self.differentials.len() < length {
            let last = self.differentials.last().expect("d_1 present");
            let syz = syzygies(&ring, last.rows, &last.columns(), &[])?;
            let syz = prune(&ring, last.cols, syz, &[])?;
            self.differentials.push(Matrix::from_columns(&ring, last.cols, &syz));
        }
        Ok(())
    }

    /// Checks `d_i d_{i+1} = 0` and `ker d_i = im d_{i+1}` at every interior step.
    pub fn verify(&self) -> Result<bool> {
        let ring = &self.module.ring;
        for w in self.differentials.windows(2) {
            if !w[0].mul(&w[1], ring)?.is_zero_mod(ring) {
                return Ok(false);
            }
            let ker = syzygies(ring, w[0].rows, &w[0].columns(), &[])?;
            let img = Span::new(ring, w[0].cols, &w[1].columns())?;
            if !ker.iter().all(|k| img.contains(k)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn free_resolution(m: &ModulePresentation, length: usize) -> Result<FreeResolutionPrefix> {
    let mut res = FreeResolutionPrefix::new(m);
    res.extend_to(length.max(1))?;
    res.differentials.truncate(length.max(1));
    Ok(res)
}

/// `M^dim` as vectors in `R^{dim * rank}`; copy `i`, coordinate `j` sits at
/// `i * rank + j`.
pub(crate) fn block_relations(m: &ModulePresentation, dim: usize) -> Vec<Vec<Polynomial>> {
    let r = m.rank();
    let cols = m.relation_columns();
    let mut out = Vec::with_capacity(dim * cols.len());
    for i in 0..dim {
        for c in &cols {
            let mut v = vec![m.ring.zero(); dim * r];
            v[i * r..(i + 1) * r].clone_from_slice(c);
            out.push(v);
        }
    }
    out
}

/// Columns of `A (x) I_r` for an `R`-matrix `A`.
fn tensor_columns(a: &Matrix, r: usize, ring: &RingPresentation) -> Vec<Vec<Polynomial>> {
    let mut out = Vec::with_capacity(a.cols * r);
    for l in 0..a.cols {
        for j in 0..r {
            let mut v = vec![ring.zero(); a.rows * r];
            for i in 0..a.rows {
                v[i * r + j] = a.get(i, l).clone();
            }
            out.push(v);
        }
    }
    out
}

/// Homology of `M^a -(A)-> M^dim -(B)-> M^c` at the middle term. Returns
/// `None` when `ker B = im A`, else the least kernel generator outside the
/// image.
pub(crate) fn homology_witness(
    m: &ModulePresentation,
    incoming: Option<&Matrix>,
    outgoing: Option<&Matrix>,
    dim: usize,
) -> Result<Option<Vec<Polynomial>>> {
    let ring = &m.ring;
    let r = m.rank();
    if dim == 0 || r == 0 {
        return Ok(None);
    }
    let kernel: Vec<Vec<Polynomial>> = match outgoing {
        Some(b) if b.rows > 0 => {
            if b.cols != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.cols });
            }
            syzygies(ring, b.rows * r, &tensor_columns(b, r, ring), &block_relations(m, b.rows))?
        }
        _ => (0..dim * r).map(|i| unit_vector(ring, dim * r, i)).collect(),
    };
    let mut image = block_relations(m, dim);
    if let Some(a) = incoming {
        if a.rows != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: a.rows });
        }
        image.extend(tensor_columns(a, r, ring));
    }
    let span = Span::new(ring, dim * r, &image)?;
    Ok(kernel.into_iter().rev().find(|k| !span.contains(k)))
}

/// Re-checks a homology witness: a cycle that is not a boundary.
pub(crate) fn validate_homology_witness(
    m: &ModulePresentation,
    incoming: Option<&Matrix>,
    outgoing: Option<&Matrix>,
    dim: usize,
    w: &[Polynomial],
) -> Result<bool> {
    let ring = &m.ring;
    let r = m.rank();
    if w.len() != dim * r {
        return Err(Error::DimensionMismatch { expected: dim * r, found: w.len() });
    }
    w.iter().try_for_each(|p| ring.check_poly(p))?;
    if let Some(b) = outgoing {
        let img = apply_tensor(b, r, w, ring);
        if !Span::new(ring, b.rows * r, &block_relations(m, b.rows))?.contains(&img) {
            return Ok(false);
        }
    }
    let mut image = block_relations(m, dim);
    if let Some(a) = incoming {
        image.extend(tensor_columns(a, r, ring));
    }
    Ok(!Span::new(ring, dim * r, &image)?.contains(w))
}

/// `(A (x) I_r) w`.
fn apply_tensor(a: &Matrix, r: usize, w: &[Polynomial], ring: &RingPresentation) -> Vec<Polynomial> {
    let mut out = vec![ring.zero(); a.rows * r];
    for i in 0..a.rows {
        for k in 0..a.cols {
            let e = a.get(i, k);
            if e.is_zero() {
                continue;
            }
            for j in 0..r {
                let x = &w[k * r + j];
                if !x.is_zero() {
                    out[i * r + j] = &out[i * r + j] + &(e * x);
                }
            }
        }
    }
    out
}

/// Incrementally resolves `R/I` to decide `Ext^p(R/I, M) = 0`.
pub struct ExtProbe {
    module: ModulePresentation,
    resolution: FreeResolutionPrefix,
    trivial: bool,
}

impl ExtProbe {
    pub fn new(ideal: &IdealSpec, m: &ModulePresentation) -> Result<Self> {
        m.ring.check_same(ideal.ring(), "Ext")?;
        if ideal.is_unit()? {
            return Err(Error::invalid("Ext against the unit ideal"));
        }
        // IM = M forces I + ann(M) = R, which kills every Ext^p(R/I, M).
        let trivial = m.quotient_by_ideal(ideal)?.is_zero()?;
        Ok(ExtProbe { module: m.clone(), resolution: FreeResolutionPrefix::new(&ModulePresentation::cyclic(ideal)), trivial })
    }

    /// `IM = M`, so every Ext group vanishes.
    pub fn all_vanish(&self) -> bool {
        self.trivial
    }

    pub fn resolution(&self) -> &FreeResolutionPrefix {
        &self.resolution
    }

    /// Returns a nonzero class of `Ext^p`, as an element of `M^{rank F_p}`,
    /// or `None` when it vanishes.
    pub fn witness(&mut self, p: usize) -> Result<Option<Vec<Polynomial>>> {
        if self.trivial {
            return Ok(None);
        }
        self.resolution.extend_to(p + 1)?;
        let d = &self.resolution.differentials;
        let outgoing = d[p].transpose();
        let incoming = if p == 0 { None } else { Some(d[p - 1].transpose()) };
        homology_witness(&self.module, incoming.as_ref(), Some(&outgoing), self.resolution.rank(p))
    }
}

impl ExtProbe {
    /// Re-checks an Ext witness against the computed resolution.
    pub fn validate(&mut self, p: usize, w: &[Polynomial]) -> Result<bool> {
        self.resolution.extend_to(p + 1)?;
        let d = &self.resolution.differentials;
        let outgoing = d[p].transpose();
        let incoming = if p == 0 { None } else { Some(d[p - 1].transpose()) };
        validate_homology_witness(&self.module, incoming.as_ref(), Some(&outgoing), self.resolution.rank(p), w)
    }
}

pub fn ext_vanishes(p: usize, ideal: &IdealSpec, m: &ModulePresentation) -> Result<bool> {
    Ok(ExtProbe::new(ideal, m)?.witness(p)?.is_none())
}

/// `0 :_M I`; the zero ideal (no generators) gives all of `M`.
pub fn annihilator_submodule(ideal: &IdealSpec, m: &ModulePresentation) -> Result<EmbeddedSubmodule> {
    m.ring.check_same(ideal.ring(), "annihilator")?;
    let ring = &m.ring;
    let r = m.rank();
    let gens = ideal.generators();
    if gens.is_empty() {
        return EmbeddedSubmodule::new(m, (0..r).map(|i| unit_vector(ring, r, i)).collect());
    }
    let s = gens.len();
    let columns: Vec<Vec<Polynomial>> = (0..r)
        .map(|j| {
            let mut v = vec![ring.zero(); s * r];
            for (i, g) in gens.iter().enumerate() {
                v[i * r + j] = g.clone();
            }
            v
        })
        .collect();
    let syz = syzygies(ring, s * r, &columns, &block_relations(m, s))?;
    EmbeddedSubmodule::new(m, syz)
}

/// `Γ_I(M)` approximated by `0 :_M I^n` for `n <= cap`.
#[derive(Clone, Debug)]
pub struct GammaResult {
    pub submodule: EmbeddedSubmodule,
    /// Least `n` with `0 :_M I^n = 0 :_M I^{n+1}`, if found within the cap.
    pub stabilized_at: Option<usize>,
}

impl GammaResult {
    pub fn stabilized(&self) -> bool {
        self.stabilized_at.is_some()
    }
}

pub fn gamma_submodule(ideal: &IdealSpec, m: &ModulePresentation, cap: usize) -> Result<GammaResult> {
    if cap == 0 {
        return Err(Error::invalid("power cap must be at least 1"));
    }
    let mut prev = annihilator_submodule(ideal, m)?;
    for n in 1..cap {
        let next = annihilator_submodule(&ideal_power(ideal, n + 1).ideal, m)?;
        if next.equals(&prev)? {
            return Ok(GammaResult { submodule: prev, stabilized_at: Some(n) });
        }
        prev = next;
    }
    Ok(GammaResult { submodule: prev, stabilized_at: None })
}

/// `M / (y_1, ..., y_t) M`.
pub fn quotient_by_sequence(m: &ModulePresentation, ys: &[Polynomial]) -> Result<ModulePresentation> {
    let ring = &m.ring;
    let r = m.rank();
    let mut cols = m.relation_columns();
    for y in ys {
        ring.check_poly(y)?;
        for j in 0..r {
            let mut v = vec![ring.zero(); r];
            v[j] = y.clone();
            cols.push(v);
        }
    }
    ModulePresentation::new(ring, Matrix::from_columns(ring, r, &cols))
}

/// `a` is a nonzerodivisor on `M` and `aM != M`.
pub fn is_regular_element(a: &Polynomial, m: &ModulePresentation) -> Result<bool> {
    let ring = &m.ring;
    ring.check_poly(a)?;
    if quotient_by_sequence(m, std::slice::from_ref(a))?.is_zero()? {
        return Ok(false);
    }
    let r = m.rank();
    let cols: Vec<Vec<Polynomial>> = (0..r)
        .map(|j| {
            let mut v = vec![ring.zero(); r];
            v[j] = a.clone();
            v
        })
        .collect();
    let rels = m.relation_columns();
    let killed = syzygies(ring, r, &cols, &rels)?;
    let span = m.span()?;
    Ok(killed.iter().all(|v| span.contains(v)))
}
