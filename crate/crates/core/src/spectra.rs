//! Sector-resolved exact diagonalization via translation-symmetry projection.

use crate::error::Result;
use crate::hamiltonian::HamiltonianMatrix;
use crate::linalg;
use crate::state::TwoExcitationState;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

/// Orbits of the one-site translation acting on basis entries. Each orbit is
/// listed as the sequence of basis indices (rep, T·rep, T²·rep, …); its
/// length divides N.
fn translation_orbits(h: &HamiltonianMatrix) -> Vec<Vec<usize>> {
    let dim = h.dimension();
    let mut seen = vec![false; dim];
    let mut orbits = Vec::new();
    for start in 0..dim {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut cur = h.basis().translated_index(start);
        while cur != start {
            seen[cur] = true;
            orbit.push(cur);
            cur = h.basis().translated_index(cur);
        }
        orbits.push(orbit);
    }
    orbits
}

/// Orthonormal momentum-sector basis W_r (columns) for momentum index `r`.
///
/// Each translation orbit of length L contributes one column
/// (1/√L) Σ_t e^{−iPt} ê_{T^t·rep} exactly when e^{iPL} = 1; the resulting
/// columns satisfy T·w = e^{iP} w.
fn sector_basis(h: &HamiltonianMatrix, r: usize) -> Array2<Complex64> {
    let n = h.params().n;
    let dim = h.dimension();
    let p = h.params().momentum(r);
    let orbits = translation_orbits(h);
    let mut columns = Vec::new();
    for orbit in &orbits {
        let l = orbit.len();
        if (r * l) % n != 0 {
            continue;
        }
        let mut col = Array1::<Complex64>::zeros(dim);
        let weight = 1.0 / (l as f64).sqrt();
        for (t, &pos) in orbit.iter().enumerate() {
            col[pos] = Complex64::from_polar(weight, -p * t as f64);
        }
        columns.push(col);
    }
    let mut w = Array2::zeros((dim, columns.len()));
    for (j, col) in columns.into_iter().enumerate() {
        w.column_mut(j).assign(&col);
    }
    w
}

/// Diagonalizes one total-momentum sector (P = 2πr/N) of the Hamiltonian.
/// Returns (energy, eigenstate) pairs sorted ascending by energy; states are
/// normalized, carry their momentum index, and satisfy T|ψ⟩ = e^{iP}|ψ⟩.
pub fn diagonalize_sector(
    h: &HamiltonianMatrix,
    r: usize,
) -> Result<Vec<(f64, TwoExcitationState)>> {
    let w = sector_basis(h, r);
    let sector_dim = w.ncols();
    if sector_dim == 0 {
        return Ok(Vec::new());
    }
    let wh = w.t().mapv(|z| z.conj());
    let h_sector = wh.dot(h.entries()).dot(&w);
    let (vals, vecs) = linalg::eigh(&h_sector)?;

    let mut out = Vec::with_capacity(sector_dim);
    for (idx, &e) in vals.iter().enumerate() {
        let full = w.dot(&vecs.column(idx).to_owned());
        let mut st = h.basis().unpack(&full);
        st.energy = Some(e);
        st.total_momentum_index = Some(r);
        out.push((e, st));
    }
    Ok(out)
}

/// Diagonalizes every momentum sector and returns all eigenpairs sorted
/// ascending by energy (ties broken by momentum index).
pub fn diagonalize_all_sectors(
    h: &HamiltonianMatrix,
) -> Result<Vec<(f64, TwoExcitationState)>> {
    let mut all = Vec::with_capacity(h.dimension());
    for r in 0..h.params().n {
        all.extend(diagonalize_sector(h, r)?);
    }
    all.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(x.1.total_momentum_index.cmp(&y.1.total_momentum_index))
    });
    Ok(all)
}

/// Eigenvalues of one sector only (ascending).
pub fn sector_eigenvalues(h: &HamiltonianMatrix, r: usize) -> Result<Vec<f64>> {
    Ok(diagonalize_sector(h, r)?.into_iter().map(|(e, _)| e).collect())
}
