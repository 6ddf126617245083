use super::realization::{certify, split_from_idempotent, IrreducibilityCertificate};
use super::ParameterArray;
use crate::linalg::{
    closure_under, distinct_eigenvalues, is_diagonalizable, lagrange_idempotents, rank, Matrix, Subspace,
};
use crate::report::Report;
use crate::scalar::{Field, PrecisionConfig};
use crate::uq::vanishes;

/// Whether `A`, `A*` have a common invariant subspace other than `0` and the whole space.
#[derive(Clone, Debug, PartialEq)]
pub enum Irreducibility<F: Field> {
    /// Certified through a one-dimensional eigenspace; `dual` says whether it belongs to `A*`,
    /// `index` is its position in the eigenvalue list.
    Irreducible { dual: bool, index: usize, certificate: IrreducibilityCertificate },
    /// A proper nonzero common invariant subspace, by basis.
    Reducible { witness: Vec<Vec<F>> },
    /// No one-dimensional eigenspace and no witness found.
    Undetermined,
}

/// Findings of [`verify_td_axioms`]. Orderings index into `eigenvalues` / `dual_eigenvalues`.
#[derive(Clone, Debug)]
pub struct AxiomReport<F: Field> {
    pub report: Report,
    pub eigenvalues: Vec<F>,
    pub dual_eigenvalues: Vec<F>,
    pub orderings: Vec<Vec<usize>>,
    pub dual_orderings: Vec<Vec<usize>>,
    pub irreducibility: Irreducibility<F>,
    /// Parameter arrays for every pair of standard orderings with a one-dimensional `E*_0`.
    pub arrays: Vec<ParameterArray<F>>,
}

impl<F: Field> AxiomReport<F> {
    pub fn is_td_pair(&self) -> bool {
        self.report.passed()
    }
}

/// Orderings of `es` along which `other` acts tridiagonally: the graph `i ~ j` iff
/// `E_i X E_j ≠ 0` or `E_j X E_i ≠ 0` must be a path, giving its two traversals.
fn path_orderings<F: Field>(es: &[Matrix<F>], other: &Matrix<F>) -> Option<Vec<Vec<usize>>> {
    let k = es.len();
    if k == 1 {
        return Some(vec![vec![0]]);
    }
    let scale = other.max_magnitude().max(1.0) * es.iter().map(|e| e.max_magnitude()).fold(1.0, f64::max).powi(2);
    let xe: Vec<Matrix<F>> = es.iter().map(|e| other.mul(e)).collect();
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && !vanishes(&es[i].mul(&xe[j]), scale) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let deg: Vec<usize> = adj.iter().map(|row| row.iter().filter(|&&b| b).count()).collect();
    if deg.iter().any(|&x| x == 0 || x > 2) || deg.iter().filter(|&&x| x == 1).count() != 2 {
        return None;
    }
    let start = deg.iter().position(|&x| x == 1)?;
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(next) = (0..k).find(|&j| adj[cur][j] && j != prev) {
        path.push(next);
        prev = cur;
        cur = next;
        if path.len() > k {
            return None;
        }
    }
    if path.len() != k {
        return None;
    }
    let rev = path.iter().rev().copied().collect();
    Some(vec![path, rev])
}

/// Decides irreducibility through a one-dimensional eigenspace (ends of the orderings
/// first), or finds a witness among the subspaces generated by single basis vectors.
fn irreducibility<F: Field>(
    a: &Matrix<F>,
    a_star: &Matrix<F>,
    es: &[Matrix<F>],
    ess: &[Matrix<F>],
    ends: &[(bool, usize)],
) -> Irreducibility<F> {
    let n = a.rows();
    let mut order: Vec<(bool, usize)> = ends.to_vec();
    order.extend((0..es.len()).map(|i| (false, i)).chain((0..ess.len()).map(|i| (true, i))));
    for (dual, index) in order {
        let e = if dual { &ess[index] } else { &es[index] };
        if rank(e) != 1 {
            continue;
        }
        let (certificate, generated, inv) = certify(a, a_star, e);
        if certificate.holds() {
            return Irreducible { dual, index, certificate };
        }
        let witness = if generated.dim() < n { generated } else { inv };
        return Reducible { witness: witness.basis().to_vec() };
    }
    let ctx = a.ctx();
    for k in 0..n {
        let seed = Subspace::coordinate(n, &[k], ctx);
        let c = closure_under(&[a, a_star], &seed);
        if c.dim() < n {
            return Reducible { witness: c.basis().to_vec() };
        }
    }
    Undetermined
}

use Irreducibility::{Irreducible, Reducible, Undetermined};

/// Checks the tridiagonal pair axioms for `A`, `A*`: both diagonalizable, each acting
/// tridiagonally on the other's eigenspaces in some ordering, and no common invariant
/// subspace besides `0` and the whole space. `spectra` supplies the eigenvalues;
/// otherwise they are computed.
pub fn verify_td_axioms<F: Field>(
    a: &Matrix<F>,
    a_star: &Matrix<F>,
    spectra: Option<(&[F], &[F])>,
    cfg: &PrecisionConfig,
) -> AxiomReport<F> {
    let mut rep = Report::new();
    let mut out = AxiomReport {
        report: Report::new(),
        eigenvalues: Vec::new(),
        dual_eigenvalues: Vec::new(),
        orderings: Vec::new(),
        dual_orderings: Vec::new(),
        irreducibility: Undetermined,
        arrays: Vec::new(),
    };
    let shaped = a.is_square() && a_star.is_square() && a.rows() == a_star.rows() && a.rows() > 0;
    rep.check("A, A* square of equal positive size", shaped);
    if !shaped {
        out.report = rep;
        return out;
    }
    let (eigs, dual_eigs) = match spectra {
        Some((x, y)) => (Ok(x.to_vec()), Ok(y.to_vec())),
        None => (distinct_eigenvalues(a, cfg), distinct_eigenvalues(a_star, cfg)),
    };
    let (eigs, dual_eigs) = match (eigs, dual_eigs) {
        (Ok(x), Ok(y)) => (x, y),
        (x, y) => {
            let detail = |r: &crate::Result<Vec<F>>| r.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
            rep.check_with("eigenvalues of A available", x.is_ok(), detail(&x));
            rep.check_with("eigenvalues of A* available", y.is_ok(), detail(&y));
            out.report = rep;
            return out;
        }
    };
    out.eigenvalues = eigs.clone();
    out.dual_eigenvalues = dual_eigs.clone();
    rep.check("(i) A diagonalizable", is_diagonalizable(a, &eigs));
    rep.check("(i) A* diagonalizable", is_diagonalizable(a_star, &dual_eigs));
    let (es, ess) = match (lagrange_idempotents(a, &eigs), lagrange_idempotents(a_star, &dual_eigs)) {
        (Ok(x), Ok(y)) => (x, y),
        _ => {
            rep.check("primitive idempotents", false);
            out.report = rep;
            return out;
        }
    };
    rep.check_with("d = δ", eigs.len() == dual_eigs.len(), format!("{} vs {}", eigs.len(), dual_eigs.len()));
    let ord = path_orderings(&es, a_star);
    let dord = path_orderings(&ess, a);
    rep.check("(ii) A* tridiagonal on the eigenspaces of A along a path ordering", ord.is_some());
    rep.check("(iii) A tridiagonal on the eigenspaces of A* along a path ordering", dord.is_some());
    out.orderings = ord.unwrap_or_default();
    out.dual_orderings = dord.unwrap_or_default();

    let mut ends = Vec::new();
    if let Some(o) = out.orderings.first() {
        ends.extend([(false, o[0]), (false, o[o.len() - 1])]);
    }
    if let Some(o) = out.dual_orderings.first() {
        ends.extend([(true, o[0]), (true, o[o.len() - 1])]);
    }
    let irr = irreducibility(a, a_star, &es, &ess, &ends);
    let (ok, detail) = match &irr {
        Irreducible { certificate, .. } => (true, format!("certified: {certificate:?}")),
        Reducible { witness } => (false, format!("common invariant subspace of dimension {}", witness.len())),
        Undetermined => (false, "undetermined: no one-dimensional eigenspace".to_string()),
    };
    rep.check_with("(iv) no common invariant subspace besides 0 and V", ok, detail);
    out.irreducibility = irr;

    for o in &out.orderings {
        for d in &out.dual_orderings {
            if rank(&ess[d[0]]) != 1 {
                continue;
            }
            let th: Vec<F> = o.iter().map(|&i| eigs[i].clone()).collect();
            let ts: Vec<F> = d.iter().map(|&i| dual_eigs[i].clone()).collect();
            if let Ok(z) = split_from_idempotent(a, &ess[d[0]], &th, &ts) {
                if let Ok(pa) = ParameterArray::new(th, ts, z, None) {
                    out.arrays.push(pa);
                }
            }
        }
    }
    out.report = rep;
    out
}
