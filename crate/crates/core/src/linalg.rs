//! Exact linear algebra: Smith normal form over the integers, Gaussian
//! elimination over the rationals, and an exact-rational LP feasibility
//! solver (phase-1 simplex with Bland's rule).
//!
//! Sizes throughout the crate are tiny (matrices up to 5×5, LPs with ~100
//! constraints in ≤ 5 unknowns), so everything here is dense and favors
//! being obviously correct over being fast.

use crate::rat::{rat_i, Rat};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// Invariant factors (diagonal of the Smith normal form) of an integer
/// matrix: non-negative, each dividing the next, zeros trailing.
pub fn smith_divisors(mat: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();

    let n = rows.min(cols);
    let mut divisors = Vec::with_capacity(n);
    let mut t = 0usize;
    while t < n {
        // find a pivot of smallest non-zero magnitude in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        // clear row and column t by repeated division with remainder
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = div_floor_big(&a[i][t], &a[t][t]);
                    for j in t..cols {
                        let sub = &q * &a[t][j];
                        a[i][j] -= sub;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i); // remainder becomes the smaller pivot
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = div_floor_big(&a[t][j], &a[t][t]);
                    for i in t..rows {
                        let sub = &q * &a[i][t];
                        a[i][j] -= sub;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }

        // enforce divisibility: pivot must divide every trailing entry
        let mut redo = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    // fold the offending row into row t and restart this step
                    for jj in t..cols {
                        let add = a[i][jj].clone();
                        a[t][jj] += add;
                    }
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue;
        }

        divisors.push(a[t][t].abs());
        t += 1;
    }
    divisors
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Determinant of a square integer matrix (Bareiss would be overkill at our
/// sizes; plain fraction-free expansion via rationals is exact).
pub fn det_int(mat: &[Vec<i64>]) -> BigInt {
    let n = mat.len();
    let rows: Vec<Vec<Rat>> = mat
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "det of non-square matrix");
            r.iter().map(|&x| rat_i(x)).collect()
        })
        .collect();
    let d = det_rat(&rows);
    assert!(d.denom().is_one());
    d.numer().clone()
}

// ---------------------------------------------------------------------------
// Rational Gaussian elimination
// ---------------------------------------------------------------------------

/// Rank of a rational matrix given by rows.
pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < m && col < n {
        let piv = (rank..m).find(|&i| !a[i][col].is_zero());
        if let Some(p) = piv {
            a.swap(rank, p);
            let inv = a[rank][col].clone();
            for i in rank + 1..m {
                if !a[i][col].is_zero() {
                    let f = &a[i][col] / &inv;
                    for j in col..n {
                        let sub = &f * &a[rank][j];
                        a[i][j] -= sub;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

/// Dimension of the affine hull of a point set (0 for a single point).
pub fn affine_rank(points: &[&[Rat]]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let rows: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(x, b)| x - b).collect())
        .collect();
    rank_rat(&rows)
}

/// Determinant of a square rational matrix.
pub fn det_rat(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let piv = (k..n).find(|&i| !a[i][k].is_zero());
        let Some(p) = piv else { return Rat::zero() };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        det *= a[k][k].clone();
        let inv = a[k][k].clone();
        for i in k + 1..n {
            if !a[i][k].is_zero() {
                let f = &a[i][k] / &inv;
                for j in k..n {
                    let sub = &f * &a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
    }
    det
}

/// One solution of `A·x = b` (free variables set to 0), or `None` if the
/// system is inconsistent.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(b.len(), m);
    if m == 0 {
        return Some(Vec::new());
    }
    let n = a[0].len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();

    let mut pivot_col: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..n {
        if r == m {
            break;
        }
        if let Some(p) = (r..m).find(|&i| !aug[i][col].is_zero()) {
            aug.swap(r, p);
            let inv = aug[r][col].clone();
            for j in col..=n {
                aug[r][j] = &aug[r][j] / &inv;
            }
            for i in 0..m {
                if i != r && !aug[i][col].is_zero() {
                    let f = aug[i][col].clone();
                    for j in col..=n {
                        let sub = &f * &aug[r][j];
                        aug[i][j] -= sub;
                    }
                }
            }
            pivot_col.push(col);
            r += 1;
        }
    }
    // inconsistent row: 0 = nonzero
    for i in r..m {
        if !aug[i][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &col) in pivot_col.iter().enumerate() {
        x[col] = aug[row][n].clone();
    }
    Some(x)
}

/// Integer solution of `A·x = b` for unimodular square `A` (|det| = 1).
/// Panics if `A` is not unimodular — callers certify that first.
pub fn solve_unimodular(a: &[Vec<i64>], b: &[i64]) -> Vec<i64> {
    let d = det_int(a);
    assert!(d.abs().is_one(), "matrix not unimodular (det {d})");
    let ar: Vec<Vec<Rat>> = a.iter().map(|r| r.iter().map(|&x| rat_i(x)).collect()).collect();
    let br: Vec<Rat> = b.iter().map(|&x| rat_i(x)).collect();
    let x = solve_rat(&ar, &br).expect("unimodular system is always solvable");
    x.iter()
        .map(|xi| {
            assert!(xi.denom().is_one());
            i64::try_from(xi.numer().clone()).expect("solution exceeds i64")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Exact LP feasibility
// ---------------------------------------------------------------------------

/// A linear constraint `⟨coeffs, x⟩ ≤ rhs` over free (sign-unrestricted)
/// variables.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
}

/// Exact feasibility of `{x : ⟨aᵢ,x⟩ ≤ bᵢ}`: returns a feasible point or
/// `None`.  Phase-1 simplex with Bland's rule (no cycling), variables split
/// into positive and negative parts.
pub fn lp_feasible(constraints: &[Constraint]) -> Option<Vec<Rat>> {
    let m = constraints.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let n = constraints[0].coeffs.len();

    // Standard form: A'(u,v) + s = b with u,v,s ≥ 0, rows flipped so b ≥ 0;
    // flipped rows get an artificial variable.  Columns are laid out as
    // [u(n) | v(n) | s(m) | artificials].
    let mut need_art: Vec<bool> = Vec::with_capacity(m);
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    for c in constraints {
        assert_eq!(c.coeffs.len(), n);
        let flip = c.rhs < Rat::zero();
        need_art.push(flip);
        let sgn = if flip { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); 2 * n + m];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a * &sgn;
            row[n + j] = -(a * &sgn);
        }
        rows.push(row);
        rhs.push(&c.rhs * &sgn);
    }
    let n_art: usize = need_art.iter().filter(|&&x| x).count();
    let width = 2 * n + m + n_art;
    let mut art_col = 2 * n + m;
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(width, Rat::zero());
        let slack = 2 * n + i;
        let sgn = if need_art[i] { -Rat::one() } else { Rat::one() };
        row[slack] = sgn;
        if need_art[i] {
            row[art_col] = Rat::one();
            basis.push(art_col);
            art_col += 1;
        } else {
            basis.push(slack);
        }
    }

    // objective: minimise the sum of artificials ⇒ reduced costs start as
    // −Σ(artificial rows)
    let mut obj = vec![Rat::zero(); width];
    let mut obj_val = Rat::zero();
    for i in 0..m {
        if need_art[i] {
            for j in 0..width {
                if !rows[i][j].is_zero() {
                    let sub = rows[i][j].clone();
                    obj[j] -= sub;
                }
            }
            obj_val -= rhs[i].clone();
        }
    }
    // artificial columns themselves have cost 1; cancel their −1 entries
    for j in 2 * n + m..width {
        obj[j] = Rat::zero();
    }

    loop {
        // Bland: entering = first column with negative reduced cost
        let Some(enter) = (0..width).find(|&j| obj[j] < Rat::zero()) else {
            break;
        };
        // ratio test, Bland ties by basis index
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if rows[i][enter] > Rat::zero() {
                let ratio = &rhs[i] / &rows[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => &ratio < b || (&ratio == b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else {
            // unbounded phase-1 objective cannot happen (bounded below by 0)
            unreachable!("phase-1 simplex unbounded");
        };
        // pivot
        let piv = rows[li][enter].clone();
        for j in 0..width {
            rows[li][j] = &rows[li][j] / &piv;
        }
        rhs[li] = &rhs[li] / &piv;
        for i in 0..m {
            if i != li && !rows[i][enter].is_zero() {
                let f = rows[i][enter].clone();
                for j in 0..width {
                    let sub = &f * &rows[li][j];
                    rows[i][j] -= sub;
                }
                let sub = &f * &rhs[li];
                rhs[i] -= sub;
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let sub = &f * &rows[li][j];
                obj[j] -= sub;
            }
            let sub = &f * &rhs[li];
            obj_val -= sub;
        }
        basis[li] = enter;
    }

    if !obj_val.is_zero() {
        return None; // artificials cannot all reach zero ⇒ infeasible
    }
    let mut x = vec![Rat::zero(); 2 * n];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * n {
            x[b] = rhs[i].clone();
        }
    }
    Some((0..n).map(|j| &x[j] - &x[n + j]).collect())
}

/// Result of an exact linear program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    /// An optimal point and the optimal objective value.
    Optimal(Vec<Rat>, Rat),
}

/// Exactly minimise `⟨obj, x⟩` over `{x : ⟨aᵢ,x⟩ ≤ bᵢ}` with free variables.
/// Two-phase simplex with Bland's rule throughout, so it terminates and the
/// optimum is exact.
pub fn lp_minimize(obj: &[Rat], constraints: &[Constraint]) -> LpOutcome {
    let m = constraints.len();
    let n = obj.len();
    if m == 0 {
        // without constraints only the zero objective is bounded
        return if obj.iter().all(|c| c.is_zero()) {
            LpOutcome::Optimal(vec![Rat::zero(); n], Rat::zero())
        } else {
            LpOutcome::Unbounded
        };
    }

    // tableau layout: [u(n) | v(n) | slack(m) | artificial(n_art)]
    let mut need_art: Vec<bool> = Vec::with_capacity(m);
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    for c in constraints {
        assert_eq!(c.coeffs.len(), n);
        let flip = c.rhs < Rat::zero();
        need_art.push(flip);
        let sgn = if flip { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); 2 * n + m];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a * &sgn;
            row[n + j] = -(a * &sgn);
        }
        rows.push(row);
        rhs.push(&c.rhs * &sgn);
    }
    let n_art: usize = need_art.iter().filter(|&&x| x).count();
    let width = 2 * n + m + n_art;
    let real_width = 2 * n + m; // columns allowed to enter in phase 2
    let mut art_col = 2 * n + m;
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(width, Rat::zero());
        let slack = 2 * n + i;
        let sgn = if need_art[i] { -Rat::one() } else { Rat::one() };
        row[slack] = sgn;
        if need_art[i] {
            row[art_col] = Rat::one();
            basis.push(art_col);
            art_col += 1;
        } else {
            basis.push(slack);
        }
    }

    // a Bland pivot step on the shared tableau; entering columns restricted
    // to `limit`
    let pivot = |rows: &mut Vec<Vec<Rat>>,
                 rhs: &mut Vec<Rat>,
                 obj_row: &mut Vec<Rat>,
                 obj_val: &mut Rat,
                 basis: &mut Vec<usize>,
                 limit: usize|
     -> Result<bool, ()> {
        let Some(enter) = (0..limit).find(|&j| obj_row[j] < Rat::zero()) else {
            return Ok(false); // optimal
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..rows.len() {
            if rows[i][enter] > Rat::zero() {
                let ratio = &rhs[i] / &rows[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        &ratio < b || (&ratio == b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(li) = leave else { return Err(()) }; // unbounded
        let piv = rows[li][enter].clone();
        for j in 0..rows[li].len() {
            rows[li][j] = &rows[li][j] / &piv;
        }
        rhs[li] = &rhs[li] / &piv;
        for i in 0..rows.len() {
            if i != li && !rows[i][enter].is_zero() {
                let f = rows[i][enter].clone();
                for j in 0..rows[i].len() {
                    let sub = &f * &rows[li][j];
                    rows[i][j] -= sub;
                }
                let sub = &f * &rhs[li];
                rhs[i] -= sub;
            }
        }
        if !obj_row[enter].is_zero() {
            let f = obj_row[enter].clone();
            for j in 0..obj_row.len() {
                let sub = &f * &rows[li][j];
                obj_row[j] -= sub;
            }
            let sub = &f * &rhs[li];
            *obj_val -= sub;
        }
        basis[li] = enter;
        Ok(true)
    };

    // phase 1: minimise the sum of artificials
    let mut obj_row = vec![Rat::zero(); width];
    let mut obj_val = Rat::zero();
    for i in 0..m {
        if need_art[i] {
            for j in 0..width {
                let sub = rows[i][j].clone();
                obj_row[j] -= sub;
            }
            obj_val -= rhs[i].clone();
        }
    }
    for j in real_width..width {
        obj_row[j] = Rat::zero();
    }
    loop {
        match pivot(&mut rows, &mut rhs, &mut obj_row, &mut obj_val, &mut basis, width) {
            Ok(true) => continue,
            Ok(false) => break,
            Err(()) => unreachable!("phase-1 objective is bounded below by zero"),
        }
    }
    if !obj_val.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive lingering artificials out of the basis before phase 2.  Each
    // such row sits at zero (the artificial sum is zero and they are all
    // nonnegative), so a degenerate pivot on any real column preserves
    // feasibility; a row with no real entries is a redundant equation and
    // is dropped.  Skipping this step is unsound: phase 2 bars artificials
    // from entering, but a pivot with a negative entry in a basic
    // artificial's row would let it grow back above zero, silently leaving
    // the feasible region (and e.g. reporting bounded equality-constrained
    // programs as unbounded).
    let mut i = 0;
    while i < rows.len() {
        if basis[i] >= real_width {
            match (0..real_width).find(|&j| !rows[i][j].is_zero()) {
                Some(j) => {
                    let piv = rows[i][j].clone();
                    for col in 0..width {
                        rows[i][col] = &rows[i][col] / &piv;
                    }
                    rhs[i] = &rhs[i] / &piv;
                    for r in 0..rows.len() {
                        if r != i && !rows[r][j].is_zero() {
                            let f = rows[r][j].clone();
                            for col in 0..width {
                                let sub = &f * &rows[i][col];
                                rows[r][col] -= sub;
                            }
                            let sub = &f * &rhs[i];
                            rhs[r] -= sub;
                        }
                    }
                    basis[i] = j;
                    i += 1;
                }
                None => {
                    rows.remove(i);
                    rhs.remove(i);
                    basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // phase 2: real objective on (u − v); artificial columns can no longer
    // act (none basic, none may enter)
    let cost = |j: usize| -> Rat {
        if j < n {
            obj[j].clone()
        } else if j < 2 * n {
            -obj[j - n].clone()
        } else {
            Rat::zero()
        }
    };
    let mut obj_row2 = vec![Rat::zero(); width];
    for (j, slot) in obj_row2.iter_mut().enumerate() {
        *slot = cost(j);
    }
    let mut obj_val2 = Rat::zero();
    for i in 0..rows.len() {
        let cb = cost(basis[i]);
        if !cb.is_zero() {
            for j in 0..width {
                let sub = &cb * &rows[i][j];
                obj_row2[j] -= sub;
            }
            let sub = &cb * &rhs[i];
            obj_val2 -= sub;
        }
    }
    loop {
        match pivot(&mut rows, &mut rhs, &mut obj_row2, &mut obj_val2, &mut basis, real_width)
        {
            Ok(true) => continue,
            Ok(false) => break,
            Err(()) => return LpOutcome::Unbounded,
        }
    }
    let mut x = vec![Rat::zero(); 2 * n];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * n {
            x[b] = rhs[i].clone();
        }
    }
    let point: Vec<Rat> = (0..n).map(|j| &x[j] - &x[n + j]).collect();
    // obj_val2 tracks −(current objective); the optimum is its negation
    LpOutcome::Optimal(point, -obj_val2)
}

/// Outcome of a standard-form program solved from a known feasible basis.
pub enum StdOutcome {
    /// An optimal `x` together with the simplex multipliers `y`, which
    /// satisfy `⟨y, Aⱼ⟩ = cⱼ` on the final basis columns and
    /// `⟨y, Aⱼ⟩ ≤ cⱼ` everywhere, and the optimal value `⟨c, x⟩ = ⟨y, b⟩`.
    Optimal {
        x: Vec<Rat>,
        multipliers: Vec<Rat>,
        value: Rat,
    },
    Unbounded,
}

/// Exact simplex for `min ⟨c, x⟩  s.t.  Σⱼ xⱼ Aⱼ = b, x ≥ 0`, started from
/// a caller-supplied basis (column indices whose matrix is nonsingular and
/// whose basic solution is nonnegative).  Skipping the auxiliary phase is
/// the point: callers in this crate always know a feasible basis a priori.
/// Bland's rule throughout — the programs solved here have few rows, so
/// the anti-cycling rule's longer walks stay cheap.
pub fn lp_standard_min(
    costs: &[Rat],
    columns: &[Vec<Rat>],
    rhs: &[Rat],
    basis: &[usize],
) -> StdOutcome {
    let k = rhs.len();
    let n = columns.len();
    assert_eq!(basis.len(), k, "basis must have one column per row");
    let mut tab: Vec<Vec<Rat>> = (0..k)
        .map(|r| {
            let mut row: Vec<Rat> = columns.iter().map(|col| col[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut basis = basis.to_vec();

    // Row-reduce so the starting basis columns form the identity (pivot row
    // r on column basis[r]); nonsingularity of the basis makes each pivot
    // available after elimination of the earlier ones.
    for r in 0..k {
        let col = basis[r];
        let piv_row = (r..k)
            .find(|&i| !tab[i][col].is_zero())
            .expect("starting basis is nonsingular");
        tab.swap(r, piv_row);
        let piv = tab[r][col].clone();
        for entry in tab[r].iter_mut() {
            *entry /= &piv;
        }
        for i in 0..k {
            if i != r && !tab[i][col].is_zero() {
                let factor = tab[i][col].clone();
                for j in 0..=n {
                    let sub = &factor * &tab[r][j];
                    tab[i][j] -= sub;
                }
            }
        }
        debug_assert!(tab[r][n] >= Rat::zero(), "starting basis is feasible");
    }

    loop {
        // reduced costs under the current basis; Bland: first negative enters
        let entering = (0..n).find(|&j| {
            let mut red = costs[j].clone();
            for r in 0..k {
                if !tab[r][j].is_zero() {
                    let sub = &costs[basis[r]] * &tab[r][j];
                    red -= sub;
                }
            }
            red < Rat::zero()
        });
        let Some(j) = entering else { break };
        // ratio test; Bland tie-break on the leaving basis index
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..k {
            if tab[r][j] > Rat::zero() {
                let ratio = &tab[r][n] / &tab[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return StdOutcome::Unbounded;
        };
        let piv = tab[r][j].clone();
        for entry in tab[r].iter_mut() {
            *entry /= &piv;
        }
        for i in 0..k {
            if i != r && !tab[i][j].is_zero() {
                let factor = tab[i][j].clone();
                for t in 0..=n {
                    let sub = &factor * &tab[r][t];
                    tab[i][t] -= sub;
                }
            }
        }
        basis[r] = j;
    }

    let mut x = vec![Rat::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        x[b] = tab[r][n].clone();
    }
    let value = costs
        .iter()
        .zip(&x)
        .map(|(c, xi)| c * xi)
        .fold(Rat::zero(), |acc, t| acc + t);
    // multipliers from Bᵀy = c_B; row i of Bᵀ is basis column i
    let bt: Vec<Vec<Rat>> = basis.iter().map(|&b| columns[b].clone()).collect();
    let cb: Vec<Rat> = basis.iter().map(|&b| costs[b].clone()).collect();
    let multipliers = solve_rat(&bt, &cb).expect("final simplex basis is nonsingular");
    StdOutcome::Optimal {
        x,
        multipliers,
        value,
    }
}
