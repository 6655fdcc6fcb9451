//! Fiber lattices over the fibration charts, transfer maps between charts,
//! and the monodromy operators of the torus fibration and its mirror.
//!
//! Away from the singular locus, the fibration looks like `T_N` over the
//! chart of a vertex `n` of `Δ^∨`, with fiber 1-cycles `N_n = N/Zn`.  Walls
//! between charts are indexed by skeleton points `m` with `⟨m̄,n⟩ = −1`, and
//! crossing a wall is the affine transfer `x ↦ x + ⟨m̄,x⟩n` onto the wall
//! lattice `m̄⊥`.  Composing the four transfers of a small loop
//! `n → m → n′ → m′ → n` collapses to a closed formula,
//! `[x] ↦ [x] + ⟨m̄′−m̄, x⟩[n′]`, which this module evaluates in a pinned
//! basis.  Around each trivalent site of the singular locus, the three leg
//! loops compose to the identity and their shapes classify the site: a
//! common vanishing direction spanning the columns marks a II site, a
//! common invariant covector spanning the rows marks a III site, and the
//! two families are exchanged by passing to the dual (mirror) operators
//! `(Tᵀ)⁻¹`.

use crate::error::Error;
use crate::lattice::{pairing, Monomial, NVec, ReducedM, NVARS};
use crate::linalg::{smith_divisors, solve_unimodular};
use crate::locus::{LocusSite, SiteKind};
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Small integer-vector helpers (canonical representatives throughout)
// ---------------------------------------------------------------------------

fn nv_add(a: &NVec, b: &NVec) -> NVec {
    let mut c = [0i64; NVARS];
    for t in 0..NVARS {
        c[t] = a.0[t] + b.0[t];
    }
    NVec::from_raw(c)
}

fn nv_scale(k: i64, a: &NVec) -> NVec {
    let mut c = [0i64; NVARS];
    for t in 0..NVARS {
        c[t] = k * a.0[t];
    }
    NVec::from_raw(c)
}

fn rm_add(a: &ReducedM, b: &ReducedM) -> ReducedM {
    let mut c = [0i64; NVARS];
    for t in 0..NVARS {
        c[t] = a.0[t] + b.0[t];
    }
    ReducedM(c)
}

fn rm_scale(k: i64, a: &ReducedM) -> ReducedM {
    let mut c = [0i64; NVARS];
    for t in 0..NVARS {
        c[t] = k * a.0[t];
    }
    ReducedM(c)
}

/// The rank-4 realization: canonical `N`-vectors and reduced `M`-vectors
/// are both determined by their first four coordinates (the fifth is 0,
/// respectively minus the sum), and the pairing is the plain 4-dot of the
/// two realizations.
fn first4(v: &[i64; NVARS]) -> [i64; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// Columns-to-rows: the matrix whose columns are the given 4-vectors.
fn columns_matrix(cols: &[[i64; 4]]) -> Vec<Vec<i64>> {
    (0..4).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

const UNIT: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn mat_mul(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut c = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn mat_det(a: &[[i64; 3]; 3]) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Adjugate; for |det| = 1 this is the inverse up to the sign of the det.
fn mat_adjugate(a: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let cof = |r: usize, c: usize| -> i64 {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = a[rs[0]][cs[0]] * a[rs[1]][cs[1]] - a[rs[0]][cs[1]] * a[rs[1]][cs[0]];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut adj = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            adj[i][j] = cof(j, i);
        }
    }
    adj
}

fn mat_transpose(a: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut t = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Fiber lattices
// ---------------------------------------------------------------------------

/// A rank-3 lattice attached to a fibration chart, with a declared basis.
/// Quotient variants hold class representatives; perpendicular variants
/// hold actual members.  [`FiberLattice::validate`] certifies the declared
/// basis by a Smith-form check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberLattice {
    /// `N_n = N/Zn`: fiber 1-cycles over the chart of `n`.
    QuotientN { n: NVec, basis: [NVec; 3] },
    /// `M_n = n⊥ ∩ M`: the dual side over the same chart (the mirror
    /// fiber's 1-cycles).
    PerpM { n: NVec, basis: [ReducedM; 3] },
    /// `N_m = m̄⊥ ∩ N`: the wall lattice of the facet cut by `m`.
    PerpN { m: Monomial, basis: [NVec; 3] },
    /// `M_m = M/Zm̄`: the dual of the wall lattice.
    QuotientM { m: Monomial, basis: [ReducedM; 3] },
}

impl FiberLattice {
    /// Certify the declared basis: members lie where they must, and extend
    /// (by the distinguished vector for quotients, or by saturation for
    /// perpendiculars) to a basis of the ambient rank-4 lattice — all Smith
    /// divisors 1.
    pub fn validate(&self) -> Result<(), Error> {
        let full_basis_check = |cols: Vec<[i64; 4]>, what: &str| -> Result<(), Error> {
            let div = smith_divisors(&columns_matrix(&cols));
            if div.len() != 4 || div.iter().any(|d| !num::One::is_one(&d.abs())) {
                return Err(Error::InvalidPoint(format!(
                    "declared basis of {what} is not a lattice basis (Smith divisors {div:?})"
                )));
            }
            Ok(())
        };
        let saturated_check = |cols: Vec<[i64; 4]>, what: &str| -> Result<(), Error> {
            let div = smith_divisors(&columns_matrix(&cols));
            let ones = div.iter().filter(|d| num::One::is_one(&d.abs())).count();
            if ones != 3 {
                return Err(Error::InvalidPoint(format!(
                    "declared basis of {what} does not span the saturated rank-3 \
                     lattice (Smith divisors {div:?})"
                )));
            }
            Ok(())
        };
        match self {
            FiberLattice::QuotientN { n, basis } => {
                let mut cols: Vec<[i64; 4]> = basis.iter().map(|b| first4(&b.0)).collect();
                cols.push(first4(&n.0));
                full_basis_check(cols, "N/Zn")
            }
            FiberLattice::PerpM { n, basis } => {
                for b in basis {
                    if pairing(b, n) != 0 {
                        return Err(Error::InvalidPoint(format!(
                            "{b:?} does not pair to zero with {n:?}"
                        )));
                    }
                }
                saturated_check(basis.iter().map(|b| first4(&b.0)).collect(), "n⊥ ∩ M")
            }
            FiberLattice::PerpN { m, basis } => {
                for b in basis {
                    if pairing(&m.reduced(), b) != 0 {
                        return Err(Error::InvalidPoint(format!(
                            "{b:?} is not perpendicular to {m:?}"
                        )));
                    }
                }
                saturated_check(basis.iter().map(|b| first4(&b.0)).collect(), "m̄⊥ ∩ N")
            }
            FiberLattice::QuotientM { m, basis } => {
                let mut cols: Vec<[i64; 4]> = basis.iter().map(|b| first4(&b.0)).collect();
                cols.push(first4(&m.reduced().0));
                full_basis_check(cols, "M/Zm̄")
            }
        }
    }

    /// Canonical coordinates of an `N`-side element in the declared basis.
    /// For the quotient this reduces the class of `x`; for the wall lattice
    /// `x` must be a member.
    pub fn reduce_n(&self, x: &NVec) -> Result<[i64; 3], Error> {
        match self {
            FiberLattice::QuotientN { n, basis } => {
                let cols: Vec<[i64; 4]> = basis
                    .iter()
                    .map(|b| first4(&b.0))
                    .chain(std::iter::once(first4(&n.0)))
                    .collect();
                let sol = solve_unimodular(&columns_matrix(&cols), &first4(&x.0));
                Ok([sol[0], sol[1], sol[2]])
            }
            FiberLattice::PerpN { m, basis } => {
                if pairing(&m.reduced(), x) != 0 {
                    return Err(Error::InvalidPoint(format!(
                        "{x:?} is not perpendicular to {m:?}"
                    )));
                }
                // complete with any n pairing −1 against m̄ (a vertex chart
                // of a vanishing coordinate); membership forces its
                // coefficient to zero
                let z = m.zeros().first().copied().ok_or_else(|| {
                    Error::InvalidPoint(format!("{m:?} has no vanishing coordinate"))
                })?;
                let n = NVec::vertex(z);
                let cols: Vec<[i64; 4]> = basis
                    .iter()
                    .map(|b| first4(&b.0))
                    .chain(std::iter::once(first4(&n.0)))
                    .collect();
                let sol = solve_unimodular(&columns_matrix(&cols), &first4(&x.0));
                if sol[3] != 0 {
                    return Err(Error::InvalidPoint(format!(
                        "{x:?} is not in the lattice spanned by the declared basis"
                    )));
                }
                Ok([sol[0], sol[1], sol[2]])
            }
            _ => Err(Error::WrongDomain(
                "reduce_n needs an N-side lattice".into(),
            )),
        }
    }

    /// Canonical coordinates of an `M`-side element in the declared basis.
    pub fn reduce_m(&self, x: &ReducedM) -> Result<[i64; 3], Error> {
        match self {
            FiberLattice::QuotientM { m, basis } => {
                let cols: Vec<[i64; 4]> = basis
                    .iter()
                    .map(|b| first4(&b.0))
                    .chain(std::iter::once(first4(&m.reduced().0)))
                    .collect();
                let sol = solve_unimodular(&columns_matrix(&cols), &first4(&x.0));
                Ok([sol[0], sol[1], sol[2]])
            }
            FiberLattice::PerpM { n, basis } => {
                if pairing(x, n) != 0 {
                    return Err(Error::InvalidPoint(format!(
                        "{x:?} does not pair to zero with {n:?}"
                    )));
                }
                // complete with a covector pairing ±1 against n
                let extra = dual_generator(n)?;
                let cols: Vec<[i64; 4]> = basis
                    .iter()
                    .map(|b| first4(&b.0))
                    .chain(std::iter::once(first4(&extra.0)))
                    .collect();
                let sol = solve_unimodular(&columns_matrix(&cols), &first4(&x.0));
                if sol[3] != 0 {
                    return Err(Error::InvalidPoint(format!(
                        "{x:?} is not in the lattice spanned by the declared basis"
                    )));
                }
                Ok([sol[0], sol[1], sol[2]])
            }
            _ => Err(Error::WrongDomain(
                "reduce_m needs an M-side lattice".into(),
            )),
        }
    }

    /// The chart vertex for quotient-N lattices.
    pub fn chart(&self) -> Option<&NVec> {
        match self {
            FiberLattice::QuotientN { n, .. } => Some(n),
            FiberLattice::PerpM { n, .. } => Some(n),
            _ => None,
        }
    }
}

/// An M-vector pairing to 1 with the given `N`-vector, if the vector is
/// primitive (used to complete perpendicular bases for membership tests).
fn dual_generator(n: &NVec) -> Result<ReducedM, Error> {
    // solve ⟨μ, n⟩ = 1 greedily over the f-basis μ = eᵗ − e⁴ (t < 4), whose
    // pairings with n are the first four canonical coordinates
    let c = first4(&n.0);
    let g = num::integer::gcd(
        num::integer::gcd(c[0].abs(), c[1].abs()),
        num::integer::gcd(c[2].abs(), c[3].abs()),
    );
    if g != 1 {
        return Err(Error::InvalidPoint(format!("{n:?} is not primitive")));
    }
    // extended gcd over up to four coefficients
    let mut coeff = [0i64; 4];
    let mut acc = 0i64;
    for t in 0..4 {
        if acc == 0 {
            if c[t] != 0 {
                coeff[t] = c[t].signum();
                acc = c[t].abs();
            }
            continue;
        }
        let (g2, u, v) = egcd(acc, c[t]);
        for w in coeff.iter_mut().take(t) {
            *w *= u;
        }
        coeff[t] = v;
        acc = g2;
    }
    debug_assert_eq!(acc, 1);
    let mut raw = [0i64; NVARS];
    for t in 0..4 {
        raw[t] = coeff[t];
        raw[4] -= coeff[t];
    }
    Ok(ReducedM(raw))
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, u, v) = egcd(b, a.rem_euclid(b));
        (g, v, u - a.div_euclid(b) * v)
    }
}

/// The pinned chart basis of `N_{nⁱ}`: classes of `[eʲ]` for the three
/// smallest `j ≠ i`, certified to be a lattice basis.
pub fn standard_basis(n: &NVec) -> Result<FiberLattice, Error> {
    let i = (0..NVARS)
        .find(|&i| NVec::vertex(i) == *n)
        .ok_or_else(|| Error::BadPath(format!("{n:?} is not a vertex of Δ^∨")))?;
    let members: Vec<usize> = (0..NVARS).filter(|&j| j != i).take(3).collect();
    let basis = [
        NVec::vertex(members[0]),
        NVec::vertex(members[1]),
        NVec::vertex(members[2]),
    ];
    let lat = FiberLattice::QuotientN { n: *n, basis };
    lat.validate()?;
    Ok(lat)
}

/// The basis of `M_{nⁱ} = nⁱ⊥ ∩ M` dual to [`standard_basis`]: the
/// covectors `eʲ − eᶻ` where `z` is the coordinate left out of the chart
/// basis, certified and pairing `δ_st` against the chart basis.
pub fn dual_standard_basis(n: &NVec) -> Result<FiberLattice, Error> {
    let i = (0..NVARS)
        .find(|&i| NVec::vertex(i) == *n)
        .ok_or_else(|| Error::BadPath(format!("{n:?} is not a vertex of Δ^∨")))?;
    let members: Vec<usize> = (0..NVARS).filter(|&j| j != i).take(3).collect();
    let z = (0..NVARS)
        .find(|j| *j != i && !members.contains(j))
        .expect("five coordinates leave one out");
    let mu = |j: usize| {
        let mut raw = [0i64; NVARS];
        raw[j] += 1;
        raw[z] -= 1;
        ReducedM(raw)
    };
    let basis = [mu(members[0]), mu(members[1]), mu(members[2])];
    let lat = FiberLattice::PerpM { n: *n, basis };
    lat.validate()?;
    Ok(lat)
}

// ---------------------------------------------------------------------------
// Paths and transfers
// ---------------------------------------------------------------------------

/// The loop `n → m → n′ → m′ → n` through two chart vertices and two walls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSpec {
    pub n: NVec,
    pub m: Monomial,
    pub n2: NVec,
    pub m2: Monomial,
}

/// Whether the loop satisfies the wall-incidence condition: all four
/// pairings `⟨m̄,n⟩` equal −1, i.e. both walls contain both chart faces —
/// the two points lie on the common face `α_n ∩ α_{n′}`.
pub fn path_valid(n: &NVec, m: &Monomial, n2: &NVec, m2: &Monomial) -> bool {
    pairing(&m.reduced(), n) == -1
        && pairing(&m.reduced(), n2) == -1
        && pairing(&m2.reduced(), n) == -1
        && pairing(&m2.reduced(), n2) == -1
}

/// The affine transfer onto the wall lattice: `x ↦ x + ⟨m̄,x⟩n`, defined
/// when `⟨m̄,n⟩ = −1`.  The image pairs to zero with `m̄`, and classes mod
/// `n` map isomorphically onto `m̄⊥`.
pub fn transfer(x: &NVec, m: &Monomial, n: &NVec) -> Result<NVec, Error> {
    let mr = m.reduced();
    if pairing(&mr, n) != -1 {
        return Err(Error::BadPath(format!(
            "transfer needs ⟨m̄,n⟩ = −1, got {} for {m:?}, {n:?}",
            pairing(&mr, n)
        )));
    }
    let out = nv_add(x, &nv_scale(pairing(&mr, x), n));
    debug_assert_eq!(pairing(&mr, &out), 0);
    Ok(out)
}

/// The full-lattice composite of the four transfers around a valid loop,
/// before reduction: `x + ⟨m̄,x⟩n + ⟨m̄′−m̄,x⟩n′`.
pub fn path_composite(path: &PathSpec, x: &NVec) -> Result<NVec, Error> {
    if !path_valid(&path.n, &path.m, &path.n2, &path.m2) {
        return Err(Error::BadPath(format!(
            "loop {path:?} fails the −1 pairing condition"
        )));
    }
    let d = path.m.displacement_to(&path.m2);
    Ok(nv_add(
        &nv_add(x, &nv_scale(pairing(&path.m.reduced(), x), &path.n)),
        &nv_scale(pairing(&d, x), &path.n2),
    ))
}

// ---------------------------------------------------------------------------
// Monodromy operators
// ---------------------------------------------------------------------------

/// An integral operator on a fiber lattice, written in the declared basis.
/// Always unimodular (det 1); carries the loop it came from when built from
/// one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyOperator {
    pub lattice: FiberLattice,
    /// Row-major matrix acting on coordinate columns.
    pub matrix: [[i64; 3]; 3],
    pub path: Option<PathSpec>,
}

impl MonodromyOperator {
    /// Wrap a matrix after checking unimodularity.
    pub fn from_matrix(
        lattice: FiberLattice,
        matrix: [[i64; 3]; 3],
        path: Option<PathSpec>,
    ) -> Result<Self, Error> {
        if mat_det(&matrix) != 1 {
            return Err(Error::BadLoops(format!(
                "operator determinant is {}, not 1",
                mat_det(&matrix)
            )));
        }
        Ok(MonodromyOperator { lattice, matrix, path })
    }

    pub fn identity(lattice: FiberLattice) -> Self {
        MonodromyOperator { lattice, matrix: UNIT, path: None }
    }

    pub fn det(&self) -> i64 {
        mat_det(&self.matrix)
    }

    /// `(T − I)² = 0`: a single-vanishing-cycle loop.
    pub fn is_unipotent(&self) -> bool {
        let mut d = self.matrix;
        for i in 0..3 {
            d[i][i] -= 1;
        }
        mat_mul(&d, &d) == [[0; 3]; 3]
    }

    pub fn apply(&self, x: &[i64; 3]) -> [i64; 3] {
        let mut y = [0i64; 3];
        for i in 0..3 {
            y[i] = (0..3).map(|j| self.matrix[i][j] * x[j]).sum();
        }
        y
    }

    /// `self ∘ other` (apply `other` first): the operator of the
    /// concatenated loop, which must be based in the same chart and basis.
    pub fn compose(&self, other: &MonodromyOperator) -> Result<MonodromyOperator, Error> {
        if self.lattice != other.lattice {
            return Err(Error::BadLoops(
                "cannot compose operators on different fiber lattices".into(),
            ));
        }
        Ok(MonodromyOperator {
            lattice: self.lattice.clone(),
            matrix: mat_mul(&self.matrix, &other.matrix),
            path: None,
        })
    }

    /// The operator of the reversed loop.
    pub fn inverse(&self) -> MonodromyOperator {
        MonodromyOperator {
            lattice: self.lattice.clone(),
            matrix: mat_adjugate(&self.matrix),
            path: self.path.as_ref().map(|p| PathSpec {
                n: p.n,
                m: p.m2,
                n2: p.n2,
                m2: p.m,
            }),
        }
    }

    /// The same abstract operator in the basis changed by unimodular `u`
    /// (new coordinates = `u` · old coordinates): matrix `u·T·u⁻¹`, with the
    /// declared basis vectors rewritten accordingly.
    pub fn conjugated(&self, u: &[[i64; 3]; 3]) -> Result<MonodromyOperator, Error> {
        let du = mat_det(u);
        if du.abs() != 1 {
            return Err(Error::BadLoops(format!(
                "change of basis must be unimodular, det is {du}"
            )));
        }
        let mut u_inv = mat_adjugate(u);
        if du == -1 {
            for row in u_inv.iter_mut() {
                for e in row.iter_mut() {
                    *e = -*e;
                }
            }
        }
        let matrix = mat_mul(&mat_mul(u, &self.matrix), &u_inv);
        // new basis vector t = Σ_s old_s · (u⁻¹)_{s,t}
        let lattice = match &self.lattice {
            FiberLattice::QuotientN { n, basis } => {
                let nb = |t: usize| {
                    let mut acc = NVec::from_raw([0; NVARS]);
                    for (s, b) in basis.iter().enumerate() {
                        acc = nv_add(&acc, &nv_scale(u_inv[s][t], b));
                    }
                    acc
                };
                FiberLattice::QuotientN { n: *n, basis: [nb(0), nb(1), nb(2)] }
            }
            FiberLattice::PerpM { n, basis } => {
                let nb = |t: usize| {
                    let mut acc = ReducedM([0; NVARS]);
                    for (s, b) in basis.iter().enumerate() {
                        acc = rm_add(&acc, &rm_scale(u_inv[s][t], b));
                    }
                    acc
                };
                FiberLattice::PerpM { n: *n, basis: [nb(0), nb(1), nb(2)] }
            }
            other => other.clone(),
        };
        Ok(MonodromyOperator { lattice, matrix, path: self.path.clone() })
    }
}

/// The monodromy operator of the loop `n → m → n′ → m′ → n` on `N_n` in the
/// pinned chart basis: `[x] ↦ [x] + ⟨m̄′−m̄, x⟩[n′]`.  Degenerate loops
/// (`n′ = n`) give the identity.
pub fn monodromy(
    n: &NVec,
    m: &Monomial,
    n2: &NVec,
    m2: &Monomial,
) -> Result<MonodromyOperator, Error> {
    if !path_valid(n, m, n2, m2) {
        return Err(Error::BadPath(format!(
            "loop (n={n:?}, m={m:?}, n′={n2:?}, m′={m2:?}) fails the −1 pairing condition"
        )));
    }
    let lattice = standard_basis(n)?;
    let FiberLattice::QuotientN { basis, .. } = &lattice else {
        unreachable!("standard_basis returns a chart quotient")
    };
    let d = m.displacement_to(m2);
    let mut matrix = [[0i64; 3]; 3];
    for (t, b) in basis.iter().enumerate() {
        let image = nv_add(b, &nv_scale(pairing(&d, b), n2));
        let col = lattice.reduce_n(&image)?;
        for (r, &c) in col.iter().enumerate() {
            matrix[r][t] = c;
        }
    }
    let op = MonodromyOperator {
        lattice,
        matrix,
        path: Some(PathSpec { n: *n, m: *m, n2: *n2, m2: *m2 }),
    };
    debug_assert_eq!(op.det(), 1);
    debug_assert!(op.is_unipotent());
    Ok(op)
}

/// Transport a loop operator to the neighbouring chart across the wall `m`:
/// for `T` based at `n′` and a wall with `⟨m̄,n⟩ = ⟨m̄,n′⟩ = −1`, the
/// operator of the same loop viewed from `n` is `A⁻¹ T A`, where
/// `A: N_n → N_{n′}` is the through-wall identification `[x] ↦ [x+⟨m̄,x⟩n]`.
pub fn conjugate_through(
    t: &MonodromyOperator,
    m: &Monomial,
    n: &NVec,
) -> Result<MonodromyOperator, Error> {
    let Some(n2) = t.lattice.chart().copied() else {
        return Err(Error::WrongDomain(
            "transport needs an operator on a chart lattice".into(),
        ));
    };
    let mr = m.reduced();
    if pairing(&mr, n) != -1 || pairing(&mr, &n2) != -1 {
        return Err(Error::BadPath(format!(
            "wall {m:?} does not join the charts of {n:?} and {n2:?}"
        )));
    }
    let source = standard_basis(n)?;
    let target = &t.lattice;
    let FiberLattice::QuotientN { basis: sb, .. } = &source else {
        unreachable!()
    };
    // A in matrix form between the two declared bases
    let mut a = [[0i64; 3]; 3];
    for (col, b) in sb.iter().enumerate() {
        let through = transfer(b, m, n)?;
        let coords = target.reduce_n(&through)?;
        for (r, &c) in coords.iter().enumerate() {
            a[r][col] = c;
        }
    }
    let da = mat_det(&a);
    if da.abs() != 1 {
        return Err(Error::BadPath(format!(
            "through-wall identification is not unimodular (det {da})"
        )));
    }
    let mut a_inv = mat_adjugate(&a);
    if da == -1 {
        for row in a_inv.iter_mut() {
            for e in row.iter_mut() {
                *e = -*e;
            }
        }
    }
    Ok(MonodromyOperator {
        lattice: source,
        matrix: mat_mul(&a_inv, &mat_mul(&t.matrix, &a)),
        path: None,
    })
}

/// The mirror-side operator: `(Tᵀ)⁻¹` acting on the dual lattice with the
/// dual basis, so that `⟨S y, T x⟩ = ⟨y, x⟩` holds exactly.
pub fn dual_monodromy(t: &MonodromyOperator) -> Result<MonodromyOperator, Error> {
    let FiberLattice::QuotientN { n, .. } = &t.lattice else {
        return Err(Error::WrongDomain(
            "dual monodromy is defined for operators on a chart quotient N/Zn".into(),
        ));
    };
    if t.det() != 1 {
        return Err(Error::BadLoops(format!(
            "dual monodromy needs determinant 1, got {}",
            t.det()
        )));
    }
    let dual_lattice = dual_standard_basis(n)?;
    if let (FiberLattice::QuotientN { basis, .. }, FiberLattice::PerpM { basis: mu, .. }) =
        (&t.lattice, &dual_lattice)
    {
        for (s, cov) in mu.iter().enumerate() {
            for (tt, b) in basis.iter().enumerate() {
                let expect = i64::from(s == tt);
                if pairing(cov, b) != expect {
                    return Err(Error::WrongDomain(format!(
                        "operator basis is not the pinned chart basis; its dual \
                         pairing at ({s},{tt}) is {} instead of {expect}",
                        pairing(cov, b)
                    )));
                }
            }
        }
    }
    Ok(MonodromyOperator {
        lattice: dual_lattice,
        matrix: mat_adjugate(&mat_transpose(&t.matrix)),
        path: t.path.clone(),
    })
}

// ---------------------------------------------------------------------------
// Vertex triples
// ---------------------------------------------------------------------------

/// The three leg-loop operators around one trivalent site, classified.
#[derive(Clone, Debug)]
pub struct VertexTriple {
    pub operators: [MonodromyOperator; 3],
    /// II: common vanishing direction spans all columns of `Tᵢ − I`.
    /// III: common invariant covector spans all rows.
    pub kind: SiteKind,
}

/// Validate and classify the three leg loops of a trivalent site.  The
/// operators must live on one chart lattice, their loops must stay on the
/// site's carrier face, and they must compose to the identity in the given
/// order; the classification must agree with the site's declared kind.
pub fn vertex_triple(
    site: &LocusSite,
    loops: &[MonodromyOperator; 3],
) -> Result<VertexTriple, Error> {
    if loops[1].lattice != loops[0].lattice || loops[2].lattice != loops[0].lattice {
        return Err(Error::BadLoops(
            "the three loops act on different fiber lattices".into(),
        ));
    }
    // loops must encircle legs of this site: chart vertices on its carrier
    let zeros: Vec<usize> = (0..NVARS)
        .filter(|&t| site.coords.get(t).is_some_and(Zero::is_zero))
        .collect();
    for op in loops {
        if let Some(p) = &op.path {
            for v in [&p.n, &p.n2] {
                let idx = (0..NVARS).find(|&i| NVec::vertex(i) == *v);
                if !idx.is_some_and(|i| zeros.contains(&i)) {
                    return Err(Error::BadLoops(format!(
                        "loop chart {v:?} is not a vanishing coordinate of the site"
                    )));
                }
            }
        }
    }
    let product = loops[0].compose(&loops[1].compose(&loops[2])?)?;
    if product.matrix != UNIT {
        return Err(Error::BadLoops(
            "the three leg loops do not compose to the identity — check \
             orientation and ordering"
            .into(),
        ));
    }

    // classification from the rank-1 structure of Tᵢ − I
    let mut columns: Vec<[i64; 3]> = Vec::new();
    let mut rows: Vec<[i64; 3]> = Vec::new();
    for op in loops {
        let mut d = op.matrix;
        for i in 0..3 {
            d[i][i] -= 1;
        }
        if d == [[0; 3]; 3] {
            continue;
        }
        for j in 0..3 {
            let col = [d[0][j], d[1][j], d[2][j]];
            if col != [0; 3] {
                columns.push(col);
            }
        }
        for row in &d {
            if *row != [0; 3] {
                rows.push(*row);
            }
        }
    }
    if columns.is_empty() {
        return Err(Error::BadLoops(
            "all three loops are trivial — no site structure to classify".into(),
        ));
    }
    let parallel = |vs: &[[i64; 3]]| {
        vs.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            a[0] * b[1] == a[1] * b[0]
                && a[0] * b[2] == a[2] * b[0]
                && a[1] * b[2] == a[2] * b[1]
        })
    };
    let kind = match (parallel(&columns), parallel(&rows)) {
        (true, false) => SiteKind::II,
        (false, true) => SiteKind::III,
        (true, true) => {
            return Err(Error::BadLoops(
                "legs are parallel — not a trivalent vertex structure".into(),
            ))
        }
        (false, false) => {
            return Err(Error::BadLoops(
                "loops share neither a vanishing direction nor an invariant \
                 covector"
                    .into(),
            ))
        }
    };
    if kind != site.kind {
        return Err(Error::BadLoops(format!(
            "loop triple classifies as {kind:?} but the site is {:?}",
            site.kind
        )));
    }
    Ok(VertexTriple { operators: loops.clone(), kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{delta_edges, two_faces};
    use crate::locus::{locus_graph, HostFace};
    use crate::subdivision::jittered_standard;
    use rand::{Rng, SeedableRng};

    fn v(i: usize) -> NVec {
        NVec::vertex(i)
    }

    #[test]
    fn standard_bases_are_certified_for_all_five_charts() {
        for i in 0..NVARS {
            let lat = standard_basis(&v(i)).unwrap();
            let FiberLattice::QuotientN { basis, .. } = &lat else {
                panic!("chart lattice expected")
            };
            let members: Vec<usize> = (0..NVARS).filter(|&j| j != i).take(3).collect();
            for (t, b) in basis.iter().enumerate() {
                assert_eq!(*b, v(members[t]));
            }
            // the leftover class is determined: Σ[eʲ] = 0 in N, so it is
            // minus the sum of the basis (modulo n)
            let leftover = (0..NVARS).find(|j| *j != i && !members.contains(j)).unwrap();
            let sum = basis.iter().fold(v(leftover), |acc, b| nv_add(&acc, b));
            assert_eq!(lat.reduce_n(&sum).unwrap(), [0, 0, 0]);
            // dual side pairs as the identity
            let dual = dual_standard_basis(&v(i)).unwrap();
            let FiberLattice::PerpM { basis: mu, .. } = &dual else {
                panic!("perp lattice expected")
            };
            for (s, cov) in mu.iter().enumerate() {
                for (t, b) in basis.iter().enumerate() {
                    assert_eq!(pairing(cov, b), i64::from(s == t));
                }
            }
        }
        assert!(matches!(
            standard_basis(&NVec::from_raw([1, 1, 0, 0, 0])),
            Err(Error::BadPath(_))
        ));
    }

    #[test]
    fn path_condition_examples() {
        let m = Monomial([0, 0, 5, 0, 0]);
        let m2 = Monomial([0, 0, 4, 1, 0]);
        assert!(path_valid(&v(0), &m, &v(1), &m2));
        // a vertex monomial pairs +4 against its own chart
        assert!(!path_valid(&v(0), &Monomial([5, 0, 0, 0, 0]), &v(1), &m2));
        // degenerate loop: valid whenever both walls touch the single chart,
        // and the operator is forced trivial
        assert!(path_valid(&v(0), &m, &v(0), &m2));
        let op = monodromy(&v(0), &m, &v(0), &m2).unwrap();
        assert_eq!(op.matrix, UNIT);
    }

    #[test]
    fn transfer_lands_on_the_wall_and_composes_to_the_closed_formula() {
        let m = Monomial([0, 0, 5, 0, 0]);
        let m2 = Monomial([0, 0, 4, 1, 0]);
        let (n, n2) = (v(0), v(1));
        // kernel of the correction is fixed
        let x = NVec::from_raw([1, -1, 0, 0, 0]);
        assert_eq!(pairing(&m.reduced(), &x), 0);
        assert_eq!(transfer(&x, &m, &n).unwrap(), x);
        // generic vectors land on the wall
        let y = NVec::from_raw([2, -1, 3, 0, 1]);
        let ty = transfer(&y, &m, &n).unwrap();
        assert_eq!(pairing(&m.reduced(), &ty), 0);
        // precondition enforced
        assert!(matches!(
            transfer(&y, &Monomial([5, 0, 0, 0, 0]), &n),
            Err(Error::BadPath(_))
        ));
        // four transfers = closed composite formula, on a spread of vectors
        let path = PathSpec { n, m, n2, m2 };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let raw: [i64; 5] = std::array::from_fn(|_| rng.random_range(-9..=9));
            let x = NVec::from_raw(raw);
            let four = transfer(&transfer(&x, &m, &n).unwrap(), &m2, &n2).unwrap();
            assert_eq!(four, path_composite(&path, &x).unwrap());
        }
    }

    #[test]
    fn worked_loop_matches_the_type_ii_shape() {
        let m = Monomial([0, 0, 5, 0, 0]);
        let m2 = Monomial([0, 0, 4, 1, 0]);
        let t = monodromy(&v(0), &m, &v(1), &m2).unwrap();
        assert_eq!(t.matrix, [[1, -1, 1], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(t.det(), 1);
        assert!(t.is_unipotent());
        // the reversed loop inverts exactly
        let back = monodromy(&v(0), &m2, &v(1), &m).unwrap();
        assert_eq!(back.matrix, [[1, 1, -1], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(t.compose(&back).unwrap().matrix, UNIT);
        assert_eq!(t.inverse().matrix, back.matrix);
        // a closed wall (m′ = m) gives the identity
        let triv = monodromy(&v(0), &m, &v(1), &m).unwrap();
        assert_eq!(triv.matrix, UNIT);
    }

    #[test]
    fn leg_loops_of_real_sites_classify_their_kinds() {
        let w = jittered_standard(1);
        let graph = locus_graph(&w).unwrap();

        // --- a II site: corners of its subdivision triangle, walked in a
        // loop over the face's two chart vertices
        let faces = two_faces();
        let (site, corners, chart_pair) = graph
            .sites
            .iter()
            .find_map(|s| {
                let HostFace::FaceCell { face, cell } = &s.host else {
                    return None;
                };
                let fw = w.face_weights(&faces[*face]);
                let sub = crate::subdivision::regular_subdivision(&fw).unwrap();
                let tri = &sub.cells[*cell].on_plane;
                let ms: Vec<Monomial> = tri
                    .iter()
                    .map(|&p| faces[*face].chart.from_chart(fw.chart[p]).unwrap())
                    .collect();
                Some((s.clone(), ms, faces[*face].zeros))
            })
            .expect("the graph has II sites");
        assert_eq!(corners.len(), 3);
        let (ni, nj) = (v(chart_pair[0]), v(chart_pair[1]));
        let loops = [
            monodromy(&ni, &corners[0], &nj, &corners[1]).unwrap(),
            monodromy(&ni, &corners[1], &nj, &corners[2]).unwrap(),
            monodromy(&ni, &corners[2], &nj, &corners[0]).unwrap(),
        ];
        let triple = vertex_triple(&site, &loops).unwrap();
        assert_eq!(triple.kind, SiteKind::II);
        for op in &triple.operators {
            assert_eq!(op.det(), 1);
            assert!(op.is_unipotent());
        }

        // --- a III site: the two segment endpoints seen from the three
        // adjacent faces; the third loop is transported through a wall
        let edges = delta_edges();
        let (site, m, m2, zeros) = graph
            .sites
            .iter()
            .find_map(|s| {
                let HostFace::EdgeSegment { edge, seg } = &s.host else {
                    return None;
                };
                let e = &edges[*edge];
                Some((s.clone(), e.points[*seg], e.points[*seg + 1], e.zeros))
            })
            .expect("the graph has III sites");
        let (ni, nj, nk) = (v(zeros[0]), v(zeros[1]), v(zeros[2]));
        let t1 = monodromy(&ni, &m, &nj, &m2).unwrap();
        let t2 = monodromy(&ni, &m2, &nk, &m).unwrap();
        let t3 = conjugate_through(&monodromy(&nj, &m, &nk, &m2).unwrap(), &m, &ni).unwrap();
        let triple = vertex_triple(&site, &[t1, t2, t3]).unwrap();
        assert_eq!(triple.kind, SiteKind::III);

        // consistency is enforced: the II loops cannot certify the III site
        assert!(matches!(
            vertex_triple(&site, &loops),
            Err(Error::BadLoops(_))
        ));
    }

    #[test]
    fn triples_match_the_reference_families_up_to_one_documented_basis() {
        // II family, realized by corner walks in the face with zeros {0,1}:
        // differences e₂−e₄, −e₃+e₄, −e₂+e₃ give exactly the reference
        // matrices in the pinned basis.
        let (ni, nj) = (v(0), v(1));
        let c1 = Monomial([0, 0, 1, 1, 3]);
        let c2 = Monomial([0, 0, 2, 1, 2]);
        let c3 = Monomial([0, 0, 2, 0, 3]);
        let t1 = monodromy(&ni, &c1, &nj, &c2).unwrap();
        let t2 = monodromy(&ni, &c2, &nj, &c3).unwrap();
        let t3 = monodromy(&ni, &c3, &nj, &c1).unwrap();
        assert_eq!(t1.matrix, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(t2.matrix, [[1, 0, -1], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(t3.matrix, [[1, -1, 1], [0, 1, 0], [0, 0, 1]]);

        // III family on the Δ-edge with zeros {0,1,2}: in the pinned basis
        // the common covector sits in the third slot; one permutation-like
        // change of basis carries all three onto the reference transposed
        // family simultaneously.
        let m = Monomial([0, 0, 0, 5, 0]);
        let m2 = Monomial([0, 0, 0, 4, 1]);
        let (na, nb, nc) = (v(0), v(1), v(2));
        let s1 = monodromy(&na, &m, &nb, &m2).unwrap();
        let s2 = monodromy(&na, &m2, &nc, &m).unwrap();
        let s3 = conjugate_through(&monodromy(&nb, &m, &nc, &m2).unwrap(), &m, &na).unwrap();
        assert_eq!(
            s1.compose(&s2.compose(&s3).unwrap()).unwrap().matrix,
            UNIT
        );
        let u = [[0, 0, -1], [1, 0, 0], [0, 1, 0]];
        assert_eq!(
            s1.conjugated(&u).unwrap().matrix,
            [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
        );
        assert_eq!(
            s2.conjugated(&u).unwrap().matrix,
            [[1, 0, 0], [0, 1, 0], [-1, 0, 1]]
        );
        assert_eq!(
            s3.conjugated(&u).unwrap().matrix,
            [[1, 0, 0], [-1, 1, 0], [1, 0, 1]]
        );
    }

    #[test]
    fn duality_transposes_inverts_and_preserves_the_pairing() {
        // the reference II matrix T₁ dualizes to the III family shape
        let t = monodromy(
            &v(0),
            &Monomial([0, 0, 1, 1, 3]),
            &v(1),
            &Monomial([0, 0, 2, 1, 2]),
        )
        .unwrap();
        assert_eq!(t.matrix, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let s = dual_monodromy(&t).unwrap();
        assert_eq!(s.matrix, [[1, 0, 0], [-1, 1, 0], [0, 0, 1]]);
        // identity dualizes to identity
        let id = MonodromyOperator::identity(standard_basis(&v(0)).unwrap());
        assert_eq!(dual_monodromy(&id).unwrap().matrix, UNIT);
        // exact pairing preservation on random lattice pairs
        let FiberLattice::QuotientN { basis: nb, .. } = t.lattice.clone() else {
            panic!()
        };
        let FiberLattice::PerpM { basis: mb, .. } = s.lattice.clone() else {
            panic!()
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a: [i64; 3] = std::array::from_fn(|_| rng.random_range(-20..=20));
            let b: [i64; 3] = std::array::from_fn(|_| rng.random_range(-20..=20));
            let ta = t.apply(&a);
            let sb = s.apply(&b);
            let lift_n = |c: &[i64; 3]| {
                let mut acc = NVec::from_raw([0; NVARS]);
                for (t, bb) in nb.iter().enumerate() {
                    acc = nv_add(&acc, &nv_scale(c[t], bb));
                }
                acc
            };
            let lift_m = |c: &[i64; 3]| {
                let mut acc = ReducedM([0; NVARS]);
                for (t, bb) in mb.iter().enumerate() {
                    acc = rm_add(&acc, &rm_scale(c[t], bb));
                }
                acc
            };
            assert_eq!(
                pairing(&lift_m(&sb), &lift_n(&ta)),
                pairing(&lift_m(&b), &lift_n(&a))
            );
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        /// Any loop through two charts of a 2-face is unimodular,
        /// unipotent, inverted by the reversed loop, and its operator
        /// dualizes to one preserving both properties.
        #[test]
        fn random_face_loops_are_unipotent_and_reversible(
            face_idx in 0usize..10,
            a in 0usize..21,
            b in 0usize..21,
            gens in proptest::collection::vec(0usize..4, 0..4),
        ) {
            let faces = two_faces();
            let f = &faces[face_idx];
            let (m, m2) = (f.points[a], f.points[b]);
            let (n, n2) = (v(f.zeros[0]), v(f.zeros[1]));
            proptest::prop_assert!(path_valid(&n, &m, &n2, &m2));
            let t = monodromy(&n, &m, &n2, &m2).unwrap();
            proptest::prop_assert_eq!(t.det(), 1);
            proptest::prop_assert!(t.is_unipotent());
            let back = monodromy(&n, &m2, &n2, &m).unwrap();
            proptest::prop_assert_eq!(back.matrix, t.inverse().matrix);
            proptest::prop_assert_eq!(t.compose(&back).unwrap().matrix, UNIT);
            let s = dual_monodromy(&t).unwrap();
            proptest::prop_assert_eq!(s.det(), 1);
            proptest::prop_assert!(s.is_unipotent());
            // conjugation by an arbitrary word in elementary shears keeps
            // determinant, unipotency, and the certified basis
            let shear = |i: usize, j: usize| {
                let mut u = UNIT;
                u[i][j] = 1;
                u
            };
            let table = [shear(0, 1), shear(1, 0), shear(1, 2), shear(2, 0)];
            let mut u = UNIT;
            for g in gens {
                u = mat_mul(&u, &table[g]);
            }
            let c = t.conjugated(&u).unwrap();
            c.lattice.validate().unwrap();
            proptest::prop_assert_eq!(c.det(), 1);
            proptest::prop_assert!(c.is_unipotent());
        }
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let w = jittered_standard(1);
        let graph = locus_graph(&w).unwrap();
        let faces = two_faces();
        let (site, corners, chart_pair) = graph
            .sites
            .iter()
            .find_map(|s| {
                let HostFace::FaceCell { face, cell } = &s.host else {
                    return None;
                };
                let fw = w.face_weights(&faces[*face]);
                let sub = crate::subdivision::regular_subdivision(&fw).unwrap();
                let tri = &sub.cells[*cell].on_plane;
                let ms: Vec<Monomial> = tri
                    .iter()
                    .map(|&p| faces[*face].chart.from_chart(fw.chart[p]).unwrap())
                    .collect();
                Some((s.clone(), ms, faces[*face].zeros))
            })
            .unwrap();
        let (ni, nj) = (v(chart_pair[0]), v(chart_pair[1]));
        let loops = [
            monodromy(&ni, &corners[0], &nj, &corners[1]).unwrap(),
            monodromy(&ni, &corners[1], &nj, &corners[2]).unwrap(),
            monodromy(&ni, &corners[2], &nj, &corners[0]).unwrap(),
        ];
        let u = [[1, 1, 0], [0, 1, 0], [1, 0, 1]];
        assert_eq!(mat_det(&u), 1);
        let conj = [
            loops[0].conjugated(&u).unwrap(),
            loops[1].conjugated(&u).unwrap(),
            loops[2].conjugated(&u).unwrap(),
        ];
        // conjugated bases still certify, classes still reduce consistently
        conj[0].lattice.validate().unwrap();
        let triple = vertex_triple(&site, &conj).unwrap();
        assert_eq!(triple.kind, SiteKind::II);
    }
}
