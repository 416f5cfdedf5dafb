//! Verification of the analytic machinery: the commutator catalog with its
//! norm bounds, the kernel moment integrals I_k, the Trotter and quadrature
//! bounds, the analytic gate counts, and the step-count prescriptions.

use crate::circuits::{BlockId, BlockTally};
use crate::dense::{self, CMat};
use crate::error::{Error, Result};
use crate::fvm::{OperatorParams, UnifiedForm};
use crate::lchs::LchsPlan;
use crate::math::{self, erfc, EULER_GAMMA};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// One verified claim: a measured quantity against its admissible bound.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
}

impl BoundReport {
    pub fn ratio(&self) -> f64 {
        self.measured / self.bound
    }

    pub fn holds(&self) -> bool {
        self.ratio() <= 1.0 + 1e-9
    }
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phase(t: f64) -> Complex64 {
    dense::phase(t)
}

/// small 2x2 blocks used by the second-order catalog
fn m_upper(entry: Complex64) -> CMat {
    CMat::from_row_slice(2, 2, &[cx(0.0, 0.0), entry, cx(1.0, 0.0), cx(0.0, 0.0)])
}

fn m_lower(entry: Complex64) -> CMat {
    CMat::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(1.0, 0.0), entry, cx(0.0, 0.0)])
}

struct Catalog {
    n: usize,
    l1: f64,
    l2: f64,
}

impl Catalog {
    fn h1(&self, l: f64) -> CMat {
        dense::h1(self.n, l)
    }
    fn h2(&self, l: f64) -> CMat {
        dense::h2(self.n, l)
    }
    fn h3(&self, l: f64) -> CMat {
        dense::h3(self.n, l)
    }
    fn p0(&self) -> CMat {
        dense::corner00(self.n)
    }
    fn p1(&self) -> CMat {
        dense::corner11(self.n)
    }

    /// identities of the first-order catalog as (name, lhs, rhs) triples
    fn first_order(&self) -> Vec<(String, CMat, CMat)> {
        let n = self.n;
        let (l1, l2) = (self.l1, self.l2);
        let id1 = dense::identity(1 << (n - 1));
        let z = dense::pauli_z();
        let sin12 = (l1 - l2).sin();
        let mut out = Vec::new();

        out.push((
            "[H1(λ1),H1(λ2)] = 2i sin(λ1-λ2) I⊗Z".into(),
            dense::commutator(&self.h1(l1), &self.h1(l2)),
            dense::kron(&id1, &z) * cx(0.0, 2.0 * sin12),
        ));
        {
            let mut rhs = CMat::zeros(1 << n, 1 << n);
            for j in 2..=n {
                let idj = dense::identity(1 << (n - j));
                let a = dense::kron_all(&[
                    idj.clone(),
                    dense::sigma01(),
                    dense::kron_pow(&dense::sigma10(), j - 2),
                    z.clone(),
                ]) * phase(l1 + l2);
                let b = dense::kron_all(&[
                    idj,
                    dense::sigma10(),
                    dense::kron_pow(&dense::sigma01(), j - 2),
                    z.clone(),
                ]) * phase(-(l1 + l2));
                rhs += a - b;
            }
            out.push((
                "[H1(λ1),H2(λ2)] carry-chain form".into(),
                dense::commutator(&self.h1(l1), &self.h2(l2)),
                rhs,
            ));
        }
        out.push((
            "[H1(λ1),H3(λ2)] corner form".into(),
            dense::commutator(&self.h1(l1), &self.h3(l2)),
            dense::kron(&dense::kron_pow(&dense::sigma10(), n - 1), &z) * phase(l1 + l2)
                - dense::kron(&dense::kron_pow(&dense::sigma01(), n - 1), &z) * phase(-(l1 + l2)),
        ));
        out.push((
            "[H2(λ1),H1(λ2)] = -[H1(λ1),H2(λ2)]".into(),
            dense::commutator(&self.h2(l1), &self.h1(l2)),
            -dense::commutator(&self.h1(l1), &self.h2(l2)),
        ));
        {
            let mut rhs = CMat::zeros(1 << n, 1 << n);
            for j in 2..=n {
                let idj = dense::identity(1 << (n - j));
                rhs += dense::kron_all(&[
                    idj.clone(),
                    dense::sigma00(),
                    dense::kron_pow(&dense::sigma11(), j - 1),
                ]) - dense::kron_all(&[
                    idj,
                    dense::sigma11(),
                    dense::kron_pow(&dense::sigma00(), j - 1),
                ]);
            }
            out.push((
                "[H2(λ1),H2(λ2)] projector form".into(),
                dense::commutator(&self.h2(l1), &self.h2(l2)),
                rhs * cx(0.0, 2.0 * sin12),
            ));
        }
        out.push((
            "[H2(λ1),H3(λ2)] = 0".into(),
            dense::commutator(&self.h2(l1), &self.h3(l2)),
            CMat::zeros(1 << n, 1 << n),
        ));
        out.push((
            "[H3(λ1),H3(λ2)] = 2i sin(λ1-λ2)(σ11ⁿ-σ00ⁿ)".into(),
            dense::commutator(&self.h3(l1), &self.h3(l2)),
            (self.p1() - self.p0()) * cx(0.0, 2.0 * sin12),
        ));
        out.push((
            "[σ00ⁿ,σ11ⁿ] = 0".into(),
            dense::commutator(&self.p0(), &self.p1()),
            CMat::zeros(1 << n, 1 << n),
        ));
        out.push((
            "[σ00ⁿ,H1(λ)] corner form".into(),
            dense::commutator(&self.p0(), &self.h1(l1)),
            dense::kron(
                &dense::kron_pow(&dense::sigma00(), n - 1),
                &(dense::sigma01() * phase(l1) - dense::sigma10() * phase(-l1)),
            ),
        ));
        out.push((
            "[σ00ⁿ,H2(λ)] = 0".into(),
            dense::commutator(&self.p0(), &self.h2(l1)),
            CMat::zeros(1 << n, 1 << n),
        ));
        out.push((
            "[σ11ⁿ,H1(λ)] corner form".into(),
            dense::commutator(&self.p1(), &self.h1(l1)),
            dense::kron(
                &dense::kron_pow(&dense::sigma11(), n - 1),
                &(dense::sigma01() * phase(l1) - dense::sigma10() * phase(-l1)),
            ) * cx(-1.0, 0.0),
        ));
        out.push((
            "[σ11ⁿ,H2(λ)] = 0".into(),
            dense::commutator(&self.p1(), &self.h2(l1)),
            CMat::zeros(1 << n, 1 << n),
        ));
        // ladder-term identities
        out.push((
            "[σ10ⁿ,σ01ⁿ] = σ11ⁿ-σ00ⁿ".into(),
            dense::commutator(
                &dense::kron_pow(&dense::sigma10(), n),
                &dense::kron_pow(&dense::sigma01(), n),
            ),
            self.p1() - self.p0(),
        ));
        for j in 2..=n {
            let idj = dense::identity(1 << (n - j));
            out.push((
                format!("[s1⁻,s{j}⁻] chain form"),
                dense::commutator(&dense::s_minus_term(n, 1), &dense::s_minus_term(n, j)),
                dense::kron_all(&[
                    idj.clone(),
                    dense::sigma01(),
                    dense::kron_pow(&dense::sigma10(), j - 2),
                    z.clone(),
                ]),
            ));
            out.push((
                format!("[s1⁺,s{j}⁺] chain form"),
                dense::commutator(&dense::s_plus_term(n, 1), &dense::s_plus_term(n, j)),
                dense::kron_all(&[
                    idj,
                    dense::sigma10(),
                    dense::kron_pow(&dense::sigma01(), j - 2),
                    z.clone(),
                ]) * cx(-1.0, 0.0),
            ));
        }
        // the [σ11ⁿ, s1⁺] entry is implemented with the sign required by the
        // direct calculation (the H1-level identity above pins it)
        out.push((
            "[σ11ⁿ,s1⁺] = +σ11^(n-1)⊗σ10".into(),
            dense::commutator(&self.p1(), &dense::s_plus_term(n, 1)),
            dense::kron(&dense::kron_pow(&dense::sigma11(), n - 1), &dense::sigma10()),
        ));
        out.push((
            "[σ00ⁿ,s1⁺] = -σ00^(n-1)⊗σ10".into(),
            dense::commutator(&self.p0(), &dense::s_plus_term(n, 1)),
            dense::kron(&dense::kron_pow(&dense::sigma00(), n - 1), &dense::sigma10())
                * cx(-1.0, 0.0),
        ));
        out
    }

    /// identities of the second-order catalog
    fn second_order(&self) -> Vec<(String, CMat, CMat)> {
        let n = self.n;
        let (l1, l2) = (self.l1, self.l2);
        let dim = 1usize << n;
        let id1 = dense::identity(1 << (n - 1));
        let z = dense::pauli_z();
        let sin12 = (l1 - l2).sin();
        let cos12 = (l1 - l2).cos();
        let mut out = Vec::new();
        let dc = |a: &CMat, b: &CMat, c: &CMat| dense::commutator(a, &dense::commutator(b, c));

        out.push((
            "[H1,[H1,H1']]".into(),
            dc(&self.h1(l1), &self.h1(l1), &self.h1(l2)),
            dense::kron(
                &id1,
                &(dense::sigma01() * phase(l1) - dense::sigma10() * phase(-l1)),
            ) * cx(0.0, -4.0 * sin12),
        ));
        {
            let mut rhs = CMat::zeros(dim, dim);
            for j in 2..=n {
                let idj = dense::identity(1 << (n - j));
                rhs += dense::kron_all(&[
                    idj.clone(),
                    dense::sigma01(),
                    dense::kron_pow(&dense::sigma10(), j - 2),
                    m_upper(-phase(2.0 * l1)),
                ]) * (phase(l2) * 2.0)
                    + dense::kron_all(&[
                        idj,
                        dense::sigma10(),
                        dense::kron_pow(&dense::sigma01(), j - 2),
                        m_lower(-phase(-2.0 * l1)),
                    ]) * (phase(-l2) * 2.0);
            }
            out.push((
                "[H1,[H1,H2']] block form".into(),
                dc(&self.h1(l1), &self.h1(l1), &self.h2(l2)),
                rhs,
            ));
        }
        out.push((
            "[H1,[H2,H1']] = -[H1,[H1,H2']]".into(),
            dc(&self.h1(l1), &self.h2(l1), &self.h1(l2)),
            -dc(&self.h1(l1), &self.h1(l1), &self.h2(l2)),
        ));
        out.push((
            "[H1,[H2,H2']] projector form".into(),
            dc(&self.h1(l1), &self.h2(l1), &self.h2(l2)),
            dense::kron(
                &(dense::identity(1 << (n - 1)) * cx(2.0, 0.0)
                    - dense::kron_pow(&dense::sigma00(), n - 1)
                    - dense::kron_pow(&dense::sigma11(), n - 1)),
                &(dense::sigma01() * phase(l1) - dense::sigma10() * phase(-l1)),
            ) * cx(0.0, 2.0 * sin12),
        ));
        out.push((
            "[H1,[σ00ⁿ,H1']]".into(),
            dc(&self.h1(l1), &self.p0(), &self.h1(l2)),
            dense::kron(&dense::kron_pow(&dense::sigma00(), n - 1), &z)
                * cx(-2.0 * cos12, 0.0),
        ));
        out.push((
            "[H1,[σ00ⁿ,H2']] = 0".into(),
            dc(&self.h1(l1), &self.p0(), &self.h2(l2)),
            CMat::zeros(dim, dim),
        ));
        out.push((
            "[H1,[σ11ⁿ,H1']]".into(),
            dc(&self.h1(l1), &self.p1(), &self.h1(l2)),
            dense::kron(&dense::kron_pow(&dense::sigma11(), n - 1), &z) * cx(2.0 * cos12, 0.0),
        ));
        out.push((
            "[H1,[σ11ⁿ,H2']] = 0".into(),
            dc(&self.h1(l1), &self.p1(), &self.h2(l2)),
            CMat::zeros(dim, dim),
        ));
        {
            let mut rhs = CMat::zeros(dim, dim);
            for j in 2..=n {
                rhs += dense::s_minus_term(n, j) * (phase(l1) * cx(0.0, 4.0 * sin12))
                    - dense::s_plus_term(n, j) * (phase(-l1) * cx(0.0, 4.0 * sin12));
            }
            out.push((
                "[H2,[H1,H1']] ladder form".into(),
                dc(&self.h2(l1), &self.h1(l1), &self.h1(l2)),
                rhs,
            ));
        }
        {
            // [H2,[H1,H2']]
            let mut rhs = CMat::zeros(dim, dim);
            for j in 1..=n.saturating_sub(2) {
                let idj = dense::identity(1 << (n - 2 - j));
                rhs += dense::kron_all(&[
                    idj.clone(),
                    dense::sigma01(),
                    dense::kron_pow(&dense::sigma10(), j - 1),
                    dense::identity(2),
                    dense::sigma10(),
                ]) * (phase(2.0 * l1 + l2) * 2.0)
                    + dense::kron_all(&[
                        idj,
                        dense::sigma10(),
                        dense::kron_pow(&dense::sigma01(), j - 1),
                        dense::identity(2),
                        dense::sigma01(),
                    ]) * (phase(-(2.0 * l1 + l2)) * 2.0);
            }
            let proj = dense::identity(1 << (n - 1)) * cx(2.0, 0.0)
                - dense::kron_pow(&dense::sigma00(), n - 1)
                - dense::kron_pow(&dense::sigma11(), n - 1);
            rhs -= dense::kron(&proj, &dense::sigma10()) * phase(-l2);
            rhs -= dense::kron(&proj, &dense::sigma01()) * phase(l2);
            out.push((
                "[H2,[H1,H2']] four-term form".into(),
                dc(&self.h2(l1), &self.h1(l1), &self.h2(l2)),
                rhs,
            ));
        }
        out.push((
            "[H2,[H2,H1']] = -[H2,[H1,H2']]".into(),
            dc(&self.h2(l1), &self.h2(l1), &self.h1(l2)),
            -dc(&self.h2(l1), &self.h1(l1), &self.h2(l2)),
        ));
        {
            let mut rhs = CMat::zeros(dim, dim);
            for j in 2..=n {
                rhs += dense::s_minus_term(n, j) * (phase(l1) * cx(0.0, -4.0 * sin12))
                    + dense::s_plus_term(n, j) * (phase(-l1) * cx(0.0, 4.0 * sin12));
            }
            out.push((
                "[H2,[H2,H2']] ladder form".into(),
                dc(&self.h2(l1), &self.h2(l1), &self.h2(l2)),
                rhs,
            ));
        }
        // The corner cross terms are nonzero (the zero claims printed for
        // them do not survive a direct calculation); the corrected forms:
        if n >= 2 {
            out.push((
                "[H2,[σ00ⁿ,H1']] corrected corner form".into(),
                dc(&self.h2(l1), &self.p0(), &self.h1(l2)),
                dense::kron_all(&[
                    dense::kron_pow(&dense::sigma00(), n - 2),
                    dense::sigma01() * phase(l1 + l2) + dense::sigma10() * phase(-(l1 + l2)),
                    dense::sigma00(),
                ]) * cx(-1.0, 0.0),
            ));
            out.push((
                "[H2,[σ11ⁿ,H1']] corrected corner form".into(),
                dc(&self.h2(l1), &self.p1(), &self.h1(l2)),
                dense::kron_all(&[
                    dense::kron_pow(&dense::sigma11(), n - 2),
                    dense::sigma01() * phase(l1 + l2) + dense::sigma10() * phase(-(l1 + l2)),
                    dense::sigma11(),
                ]) * cx(-1.0, 0.0),
            ));
        }
        for (name, lhs) in [
            ("[H2,[σ00ⁿ,H2']] = 0", dc(&self.h2(l1), &self.p0(), &self.h2(l2))),
            ("[H2,[σ11ⁿ,H2']] = 0", dc(&self.h2(l1), &self.p1(), &self.h2(l2))),
            ("[σ00ⁿ,[H1,H1']] = 0", dc(&self.p0(), &self.h1(l1), &self.h1(l2))),
            ("[σ00ⁿ,[H2,H2']] = 0", dc(&self.p0(), &self.h2(l1), &self.h2(l2))),
            ("[σ11ⁿ,[H1,H1']] = 0", dc(&self.p1(), &self.h1(l1), &self.h1(l2))),
            ("[σ11ⁿ,[H2,H2']] = 0", dc(&self.p1(), &self.h2(l1), &self.h2(l2))),
            ("[σ00ⁿ,[σ00ⁿ,H2]] = 0", dc(&self.p0(), &self.p0(), &self.h2(l1))),
            ("[σ00ⁿ,[σ11ⁿ,H1]] = 0", dc(&self.p0(), &self.p1(), &self.h1(l1))),
            ("[σ00ⁿ,[σ11ⁿ,H2]] = 0", dc(&self.p0(), &self.p1(), &self.h2(l1))),
            ("[σ11ⁿ,[σ00ⁿ,H1]] = 0", dc(&self.p1(), &self.p0(), &self.h1(l1))),
            ("[σ11ⁿ,[σ00ⁿ,H2]] = 0", dc(&self.p1(), &self.p0(), &self.h2(l1))),
            ("[σ11ⁿ,[σ11ⁿ,H2]] = 0", dc(&self.p1(), &self.p1(), &self.h2(l1))),
        ] {
            out.push((name.into(), lhs, CMat::zeros(dim, dim)));
        }
        if n >= 2 {
            out.push((
                "[σ00ⁿ,[H1,H2']] sandwich form".into(),
                dc(&self.p0(), &self.h1(l1), &self.h2(l2)),
                dense::kron_all(&[
                    dense::kron_pow(&dense::sigma00(), n - 2),
                    dense::sigma01() * phase(l1 + l2) + dense::sigma10() * phase(-(l1 + l2)),
                    dense::sigma00(),
                ]),
            ));
            out.push((
                "[σ00ⁿ,[H2,H1']] = -[σ00ⁿ,[H1,H2']]".into(),
                dc(&self.p0(), &self.h2(l1), &self.h1(l2)),
                -dc(&self.p0(), &self.h1(l2), &self.h2(l1)),
            ));
            out.push((
                "[σ11ⁿ,[H1,H2']] sandwich form".into(),
                dc(&self.p1(), &self.h1(l1), &self.h2(l2)),
                dense::kron_all(&[
                    dense::kron_pow(&dense::sigma11(), n - 2),
                    dense::sigma01() * phase(l1 + l2) + dense::sigma10() * phase(-(l1 + l2)),
                    dense::sigma11(),
                ]),
            ));
        }
        out.push((
            "[σ00ⁿ,[σ00ⁿ,H1]] sum form".into(),
            dc(&self.p0(), &self.p0(), &self.h1(l1)),
            dense::kron(
                &dense::kron_pow(&dense::sigma00(), n - 1),
                &(dense::sigma01() * phase(l1) + dense::sigma10() * phase(-l1)),
            ),
        ));
        out.push((
            "[σ11ⁿ,[σ11ⁿ,H1]] sum form".into(),
            dc(&self.p1(), &self.p1(), &self.h1(l1)),
            dense::kron(
                &dense::kron_pow(&dense::sigma11(), n - 1),
                &(dense::sigma01() * phase(l1) + dense::sigma10() * phase(-l1)),
            ),
        ));
        // periodic-case identities at equal phases λ = λ1
        let l = l1;
        if n >= 2 {
            out.push((
                "[H2,[H3,H1]] corner form".into(),
                dc(&self.h2(l), &self.h3(l), &self.h1(l)),
                -(dense::kron_all(&[
                    dense::kron_pow(&dense::sigma10(), n - 2),
                    dense::identity(2),
                    dense::sigma10(),
                ]) * phase(3.0 * l))
                    - (dense::kron_all(&[
                        dense::kron_pow(&dense::sigma01(), n - 2),
                        dense::identity(2),
                        dense::sigma01(),
                    ]) * phase(-3.0 * l)),
            ));
            out.push((
                "[H3,[H2,H1]] corner form".into(),
                dc(&self.h3(l), &self.h2(l), &self.h1(l)),
                -(dense::kron_all(&[
                    dense::kron_pow(&dense::sigma10(), n - 2),
                    dense::identity(2),
                    dense::sigma10(),
                ]) * phase(3.0 * l))
                    - (dense::kron_all(&[
                        dense::kron_pow(&dense::sigma01(), n - 2),
                        dense::identity(2),
                        dense::sigma01(),
                    ]) * phase(-3.0 * l)),
            ));
        }
        out.push((
            "[H3,[H3,H1]] projector form".into(),
            dc(&self.h3(l), &self.h3(l), &self.h1(l)),
            dense::kron(
                &(dense::kron_pow(&dense::sigma00(), n - 1)
                    + dense::kron_pow(&dense::sigma11(), n - 1)),
                &(dense::sigma01() * phase(l) + dense::sigma10() * phase(-l)),
            ),
        ));
        // the sign of the second term follows from Hermiticity of the
        // double commutator (a direct expansion confirms it)
        out.push((
            "[H1,[H1,H3]] block form".into(),
            dc(&self.h1(l), &self.h1(l), &self.h3(l)),
            dense::kron(&dense::kron_pow(&dense::sigma10(), n - 1), &m_upper(-phase(2.0 * l)))
                * (phase(l) * 2.0)
                + dense::kron(
                    &dense::kron_pow(&dense::sigma01(), n - 1),
                    &m_lower(-phase(-2.0 * l)),
                ) * (phase(-l) * 2.0),
        ));
        out
    }
}

/// Entrywise verification of the commutator catalog plus the norm claims,
/// for λ pairs (λ1, λ2) and corner strengths drawn deterministically.
pub fn commutator_suite(n: usize) -> Result<Vec<BoundReport>> {
    if !(2..=6).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n}"), "2..=6".into()));
    }
    let mut reports = Vec::new();
    for (l1, l2) in [(0.0, std::f64::consts::FRAC_PI_2), (0.3, 1.1), (2.0, -0.7)] {
        let cat = Catalog { n, l1, l2 };
        for (name, lhs, rhs) in cat.first_order().into_iter().chain(cat.second_order()) {
            let dev = dense::max_abs(&(lhs - rhs));
            reports.push(BoundReport {
                name: format!("n={n} λ=({l1},{l2}): {name}"),
                measured: dev,
                bound: 1e-12,
            });
        }
    }
    // Norm claims. The printed closed forms describe the displayed
    // expansions, which drop the nonzero corner cross terms
    // γ1γ2(s0[H2,[σ00,H1']] + s1[H2,[σ11,H1']]) of the full double
    // commutator (and the analogous γ2² terms for [H,[H,L]]); the checks
    // below verify the displayed operator reproduces the closed norm, that
    // the correction accounts for the full commutator entrywise, and that
    // the corrected bound dominates the dense norm.
    let (l1, l2) = (0.0, std::f64::consts::FRAC_PI_2);
    for (g1, g2, s0, s1) in [(1.0, 0.5, 0.7, -0.7), (0.8, 1.3, 1.1, 1.1), (1.0, 1.0, 0.4, -0.9)] {
        let l = dense::h1(n, l1) * cx(g1, 0.0)
            + dense::h2(n, l1) * cx(g1, 0.0)
            + dense::corner00(n) * cx(s0, 0.0)
            + dense::corner11(n) * cx(s1, 0.0);
        let h = (dense::h1(n, l2) + dense::h2(n, l2)) * cx(g2, 0.0);
        let s: f64 = s0.abs().max(s1.abs());
        let dc = |a: &CMat, b: &CMat, c: &CMat| dense::commutator(a, &dense::commutator(b, c));
        // [H2(λ1),[σᵏⁿ,H1(λ2)]] corner cross terms dropped by the displayed
        // expansion
        let corner_cross = |which0: bool| {
            let corner = if which0 {
                dense::sigma00()
            } else {
                dense::sigma11()
            };
            dense::kron_all(&[
                dense::kron_pow(&corner, n - 2),
                dense::sigma01() * phase(l1 + l2) + dense::sigma10() * phase(-(l1 + l2)),
                corner.clone(),
            ]) * cx(-1.0, 0.0)
        };
        let llh = dense::commutator(&l, &dense::commutator(&l, &h));
        let missing = (corner_cross(true) * cx(g1 * g2 * s0, 0.0))
            + (corner_cross(false) * cx(g1 * g2 * s1, 0.0));
        let displayed = &llh - &missing;
        let measured_displayed = dense::spectral_norm(&displayed);
        let closed =
            g2 * (4.0 * g1.powi(4) * (l1 - l2).sin().powi(2) + 4.0 * g1 * g1 * s * s + s.powi(4))
                .sqrt();
        if (s0.abs() - s1.abs()).abs() < 1e-12 {
            reports.push(BoundReport {
                name: format!("n={n}: ‖displayed [L,[L,H]]‖ = γ2√(4γ1⁴sin²+4γ1²s²+s⁴)"),
                measured: (measured_displayed - closed).abs(),
                bound: 1e-10 * closed.max(1.0),
            });
        }
        reports.push(BoundReport {
            name: format!("n={n}: ‖displayed [L,[L,H]]‖ ≤ γ2(2γ1²+s²)"),
            measured: measured_displayed,
            bound: g2 * (2.0 * g1 * g1 + s * s),
        });
        reports.push(BoundReport {
            name: format!("n={n}: ‖[L,[L,H]]‖ ≤ γ2(2γ1²+s²) + γ1γ2·s (corrected)"),
            measured: dense::spectral_norm(&llh),
            bound: g2 * (2.0 * g1 * g1 + s * s) + g1 * g2 * s,
        });
        let hhl = dense::commutator(&h, &dense::commutator(&h, &l));
        // [H,[H,L]] drops γ2²(s0[H2',[σ00,H1']] + s1[H2',[σ11,H1']]) at
        // swapped phases (λ1 ↔ λ2 both π/2 here)
        let missing_h = {
            let swap = Catalog { n, l1: l2, l2 };
            let a = dc(&swap.h2(l2), &swap.p0(), &swap.h1(l2)) * cx(g2 * g2 * s0, 0.0);
            let b = dc(&swap.h2(l2), &swap.p1(), &swap.h1(l2)) * cx(g2 * g2 * s1, 0.0);
            -(a + b)
        };
        let displayed_h = &hhl - &missing_h;
        let measured_h = dense::spectral_norm(&displayed_h);
        let closed_h = 2.0 * g2 * g2 * (g1 * g1 * (l1 - l2).sin().powi(2) + s * s).sqrt();
        if (s0.abs() - s1.abs()).abs() < 1e-12 {
            reports.push(BoundReport {
                name: format!("n={n}: ‖displayed [H,[H,L]]‖ = 2γ2²√(γ1²sin²+s²)"),
                measured: (measured_h - closed_h).abs(),
                bound: 1e-10 * closed_h.max(1.0),
            });
        }
        reports.push(BoundReport {
            name: format!("n={n}: ‖[H,[H,L]]‖ ≤ 2γ2²√(γ1²+s²) + γ2²·s (corrected)"),
            measured: dense::spectral_norm(&hhl),
            bound: 2.0 * g2 * g2 * (g1 * g1 + s * s).sqrt() + g2 * g2 * s,
        });
    }
    // H-splitting norms at λ = π/2
    let l = std::f64::consts::FRAC_PI_2;
    let h1 = dense::h1(n, l);
    let h2 = dense::h2(n, l);
    let h3 = dense::h3(n, l);
    reports.push(BoundReport {
        name: format!("n={n}: ‖[H2,[H2,H1]]‖ ≤ 4"),
        measured: dense::spectral_norm(&dense::commutator(&h2, &dense::commutator(&h2, &h1))),
        bound: 4.0,
    });
    let h1h1h2 = dense::spectral_norm(&dense::commutator(&h1, &dense::commutator(&h1, &h2)));
    let closed = 4.0 * (std::f64::consts::PI / ((1 << (n - 1)) as f64 + 1.0)).cos();
    reports.push(BoundReport {
        name: format!("n={n}: |‖[H1,[H1,H2]]‖ - 4cos(π/(2^(n-1)+1))| (equality)"),
        measured: (h1h1h2 - closed).abs(),
        bound: 1e-10,
    });
    let h23 = &h2 + &h3;
    reports.push(BoundReport {
        name: format!("n={n}: ‖[H2+H3,[H2+H3,H1]]‖ ≤ 4"),
        measured: dense::spectral_norm(&dense::commutator(&h23, &dense::commutator(&h23, &h1))),
        bound: 4.0,
    });
    reports.push(BoundReport {
        name: format!("n={n}: ‖[H1,[H1,H2+H3]]‖ ≤ 4"),
        measured: dense::spectral_norm(&dense::commutator(&h1, &dense::commutator(&h1, &h23))),
        bound: 4.0,
    });
    // periodic L and H commute exactly
    let l0 = std::f64::consts::FRAC_PI_2;
    let lp = dense::h1(n, 0.0) + dense::h2(n, 0.0) + dense::h3(n, 0.0);
    let hp = dense::h1(n, l0) + dense::h2(n, l0) + dense::h3(n, l0);
    reports.push(BoundReport {
        name: format!("n={n}: periodic [L,H] = 0"),
        measured: dense::max_abs(&dense::commutator(&lp, &hp)),
        bound: 1e-12,
    });
    Ok(reports)
}

/// Kernel moments I_k(γ, δ) = (1/√2π)∫|f̂| |r|^k dr, closed forms.
pub fn ik_closed(gamma: f64, delta: f64, k: usize) -> Result<f64> {
    let g2 = 4.0 * gamma * gamma;
    let ed = delta.exp();
    let val = match k {
        0 => ed * erfc(1.0 / (2.0 * gamma)),
        1 => {
            ed / std::f64::consts::PI
                * (2.0 * gamma.ln() + 1.0 / g2 + 2.0 * 2f64.ln() - EULER_GAMMA)
        }
        2 => {
            ed * (2.0 * gamma / std::f64::consts::PI.sqrt() * (-1.0 / g2).exp()
                - erfc(1.0 / (2.0 * gamma)))
        }
        3 => {
            ed / std::f64::consts::PI
                * (g2 * (-1.0 / g2).exp() - 2.0 * gamma.ln() - 1.0 / g2 - 2.0 * 2f64.ln()
                    + EULER_GAMMA)
        }
        _ => return Err(Error::OutOfRange(format!("k = {k}"), "0..=3".into())),
    };
    Ok(val)
}

/// The same moments by adaptive quadrature of the defining integral.
pub fn ik_numeric(gamma: f64, delta: f64, k: usize) -> Result<f64> {
    if k > 3 {
        return Err(Error::OutOfRange(format!("k = {k}"), "0..=3".into()));
    }
    let f = move |r: f64| {
        let amp = (2.0 / std::f64::consts::PI).sqrt()
            * (delta - (1.0 + r * r) / (4.0 * gamma * gamma)).exp()
            / (1.0 + r * r);
        amp * r.powi(k as i32)
    };
    let cut = 40.0 * gamma;
    let val = math::integrate_adaptive(f, 0.0, cut, 1e-12);
    Ok(2.0 * val / (2.0 * std::f64::consts::PI).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundVariant {
    Robin,
    RobinAlpha0,
    Periodic,
}

/// Per-node Trotter error bound e_j and the coefficient-weighted totals of
/// the circuit-error theorems.
#[derive(Clone, Debug)]
pub struct TrotterBound {
    pub per_node: Vec<f64>,
    /// Σ_j |c_j| e_j
    pub weighted_total: f64,
    /// the closed-form moment bound (2τ³ Σ I_k w_k or its periodic analogue)
    pub closed_total: f64,
}

/// Evaluate the per-step Trotter error bounds for one dimension.
pub fn trotter_bound(
    params: &OperatorParams,
    plan: &LchsPlan,
    tau: f64,
    variant: BoundVariant,
) -> Result<TrotterBound> {
    let t3 = tau.powi(3);
    let (gamma, delta) = (plan.gamma, plan.delta);
    match (params.form, variant) {
        (UnifiedForm::Robin { alpha, beta, s0, s1 }, BoundVariant::Robin) => {
            let s = s0.abs().max(s1.abs());
            let est = crate::fvm::eig_b(s0 / alpha, s1 / alpha, params.cells());
            let abs_lam = est.lambda_max_b.abs().max(est.lambda_min_b.abs());
            let w0 = beta.abs().powi(3) / 8.0;
            let w1 = beta * beta * (alpha * alpha + s * s).sqrt() / 12.0;
            let w2 = beta.abs() * (2.0 * alpha * alpha + s * s) / 12.0;
            let w3 = if abs_lam <= 2.0 {
                alpha.powi(3) / 2.0
            } else {
                (4.0 * alpha.powi(3)
                    + alpha * (alpha.powi(4) + s.powi(4) - alpha * alpha * s * s).sqrt()
                    + alpha.powi(3) * (s / alpha + alpha / s))
                    / 12.0
            };
            let per_node: Vec<f64> = plan
                .nodes
                .iter()
                .map(|r| (w0 + r.abs() * w1 + r * r * w2 + r.abs().powi(3) * w3) * t3)
                .collect();
            let weighted_total = plan
                .coeffs
                .iter()
                .zip(&per_node)
                .map(|(c, e)| c.norm() * e)
                .sum();
            let closed_total = 2.0
                * t3
                * (ik_closed(gamma, delta, 0)? * w0
                    + ik_closed(gamma, delta, 1)? * w1
                    + ik_closed(gamma, delta, 2)? * w2
                    + ik_closed(gamma, delta, 3)? * w3);
            Ok(TrotterBound {
                per_node,
                weighted_total,
                closed_total,
            })
        }
        (UnifiedForm::Robin { beta, s0, s1, .. }, BoundVariant::RobinAlpha0) => {
            let s = s0.abs().max(s1.abs());
            let b3 = beta.abs().powi(3);
            let per_node: Vec<f64> = plan
                .nodes
                .iter()
                .map(|r| {
                    let mu0 = -s0 * r / beta;
                    let mu1 = -s1 * r / beta;
                    let est = crate::fvm::eig_b(mu0, mu1, params.cells());
                    let abs_lam = est.lambda_max_b.abs().max(est.lambda_min_b.abs());
                    if abs_lam <= 2.0 {
                        b3 * t3 / 2.0
                    } else {
                        let sr = s * r.abs();
                        (4.0 * b3
                            + beta.abs()
                                * (beta.powi(4) + sr.powi(4) - beta * beta * sr * sr).sqrt()
                            + b3 * (sr / beta.abs() + beta.abs() / sr))
                            * t3
                            / 12.0
                    }
                })
                .collect();
            let weighted_total = plan
                .coeffs
                .iter()
                .zip(&per_node)
                .map(|(c, e)| c.norm() * e)
                .sum();
            let closed_total = beta.abs()
                * t3
                * (beta * beta * ik_closed(gamma, delta, 0)?
                    + beta.abs() * s / 6.0 * ik_closed(gamma, delta, 1)?
                    + s * s / 6.0 * ik_closed(gamma, delta, 2)?);
            Ok(TrotterBound {
                per_node,
                weighted_total,
                closed_total,
            })
        }
        (UnifiedForm::Periodic { alpha, beta }, BoundVariant::Periodic) => {
            let per_node: Vec<f64> = plan
                .nodes
                .iter()
                .map(|r| (alpha.powi(3) * r.abs().powi(3) + beta.abs().powi(3)) * t3 / 2.0)
                .collect();
            let weighted_total = plan
                .coeffs
                .iter()
                .zip(&per_node)
                .map(|(c, e)| c.norm() * e)
                .sum();
            let closed_total = ik_closed(gamma, delta, 0)? * beta.abs().powi(3) * t3
                + ik_closed(gamma, delta, 3)? * alpha.powi(3) * t3;
            Ok(TrotterBound {
                per_node,
                weighted_total,
                closed_total,
            })
        }
        _ => Err(Error::VariantMismatch("operator form and bound variant disagree")),
    }
}

/// Right-hand sides of the truncation/quadrature estimates.
#[derive(Clone, Debug)]
pub struct QuadratureBounds {
    pub eps_lchs: f64,
    pub eps_quad: f64,
    pub outer: Option<f64>,
}

pub fn quadrature_bounds(
    plan: &LchsPlan,
    l_norm: f64,
    total_time: f64,
    outer_nodes: Option<(usize, f64, f64)>, // (M_o, C_A(T), B_{A,f}(T))
) -> QuadratureBounds {
    let two_pi = 2.0 * std::f64::consts::PI;
    let eps_lchs = (two_pi + 1.0) / two_pi
        * (plan.delta - plan.delta * plan.delta * plan.gamma * plan.gamma).exp();
    let l_l1 = l_norm * total_time;
    let eps_quad = 64.0 / 15.0
        * (1.5 * plan.delta + 0.5 * l_l1 - std::f64::consts::PI / plan.dr).exp();
    let outer = outer_nodes.map(|(m_o, c_a, b_af)| {
        total_time.powi(3) * c_a * b_af / (24.0 * (m_o * m_o) as f64)
    });
    QuadratureBounds {
        eps_lchs,
        eps_quad,
        outer,
    }
}

/// Single-qubit counts with the C^jRZ single-qubit cost φ(·) kept symbolic:
/// constant + Σ coeff·φ(arg).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhiAffine {
    pub constant: i64,
    pub phi: BTreeMap<usize, i64>,
}

impl PhiAffine {
    pub fn constant(c: i64) -> Self {
        PhiAffine {
            constant: c,
            phi: BTreeMap::new(),
        }
    }

    pub fn with_phi(c: i64, terms: &[(usize, i64)]) -> Self {
        let mut phi = BTreeMap::new();
        for &(arg, coeff) in terms {
            if coeff != 0 {
                *phi.entry(arg).or_insert(0) += coeff;
            }
        }
        PhiAffine { constant: c, phi }
    }

    pub fn add(&mut self, other: &PhiAffine, times: i64) {
        self.constant += other.constant * times;
        for (&a, &c) in &other.phi {
            let e = self.phi.entry(a).or_insert(0);
            *e += c * times;
            if *e == 0 {
                self.phi.remove(&a);
            }
        }
    }

    /// Evaluate with a concrete φ model.
    pub fn eval(&self, phi: impl Fn(usize) -> i64) -> i64 {
        self.constant + self.phi.iter().map(|(&a, &c)| c * phi(a)).sum::<i64>()
    }
}

/// Gate costs (single-qubit with φ symbolic, CNOT exact).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateCost {
    pub single: PhiAffine,
    pub cnot: i64,
}

/// Per-block costs of the decomposition table. `n` is the system register
/// size of the block's target dimension.
pub fn block_cost(id: BlockId, controls: usize, n: usize) -> Result<GateCost> {
    let ni = n as i64;
    let cost = |single: PhiAffine, cnot: i64| GateCost { single, cnot };
    let out = match (id, controls) {
        (BlockId::W(1), 0) => cost(PhiAffine::constant(5), 0),
        (BlockId::W(2), 0) => cost(PhiAffine::constant(7), 4),
        (BlockId::W(3), 0) => cost(PhiAffine::constant(13), 12),
        (BlockId::W(4), 0) => cost(PhiAffine::constant(25), 26),
        (BlockId::W(j), 0) => cost(
            PhiAffine::with_phi(4, &[(j - 1, 1)]),
            18 * j as i64 - 42,
        ),
        (BlockId::W(1), 1) => cost(PhiAffine::constant(15), 10),
        (BlockId::W(2), 1) => cost(PhiAffine::constant(39), 28),
        (BlockId::W(3), 1) => cost(PhiAffine::constant(69), 52),
        (BlockId::W(j), 1) => cost(
            PhiAffine::with_phi(18 * j as i64 - 6, &[(j, 1)]),
            28 * j as i64 - 28,
        ),
        (BlockId::W(1), 2) => cost(PhiAffine::constant(45), 40),
        (BlockId::W(2), 2) => cost(PhiAffine::constant(99), 92),
        (BlockId::W(j), 2) => cost(
            PhiAffine::with_phi(42 * j as i64 - 6, &[(j + 1, 1)]),
            56 * j as i64 - 16,
        ),
        (BlockId::S1, 0) => cost(PhiAffine::with_phi(0, &[(n, 1)]), 16 * ni - 24),
        (BlockId::S1, 1) => cost(PhiAffine::with_phi(0, &[(n + 1, 1)]), 16 * ni - 8),
        (BlockId::S1, 2) => cost(PhiAffine::with_phi(0, &[(n + 2, 1)]), 16 * ni + 8),
        (BlockId::S0, 0) => cost(PhiAffine::with_phi(2 * ni, &[(n, 1)]), 16 * ni - 24),
        (BlockId::S0, 1) => cost(PhiAffine::with_phi(0, &[(n + 1, 1)]), 18 * ni - 8),
        (BlockId::S0, 2) => cost(PhiAffine::with_phi(18 * ni, &[(n + 2, 1)]), 28 * ni + 8),
        (BlockId::V, 0) => cost(
            PhiAffine::with_phi(2 * ni + 2, &[(n - 1, 1)]),
            18 * ni - 42,
        ),
        (BlockId::V, 1) => cost(PhiAffine::with_phi(18 * ni - 6, &[(n, 1)]), 28 * ni - 28),
        (BlockId::V, 2) => cost(
            PhiAffine::with_phi(60 * ni - 24, &[(n + 1, 1)]),
            68 * ni - 28,
        ),
        (BlockId::GPhase, 0) | (BlockId::AncPhase, 0) => cost(PhiAffine::constant(1), 0),
        (BlockId::GPhase, 1) | (BlockId::AncPhase, 1) => cost(PhiAffine::constant(3), 2),
        (BlockId::GPhase, 2) | (BlockId::AncPhase, 2) => cost(PhiAffine::constant(9), 8),
        (id, c) => {
            return Err(Error::OutOfRange(
                format!("block {id:?} with {c} controls"),
                "decomposition table".into(),
            ))
        }
    };
    Ok(out)
}

/// Sum the per-block table costs over an emitted block multiset.
pub fn tally_cost(tally: &BlockTally, n: usize) -> Result<GateCost> {
    let mut total = GateCost::default();
    for (&(id, ctrls), &count) in &tally.0 {
        let c = block_cost(id, ctrls, n)?;
        total.single.add(&c.single, count as i64);
        total.cnot += c.cnot * count as i64;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    SelRobin,
    SelPeriodic,
}

/// Closed-form totals of the select-oracle complexity table (valid n ≥ 5).
pub fn closed_form_cost(kind: OracleKind, n: usize, m: usize) -> Result<GateCost> {
    if n < 5 {
        return Err(Error::OutOfRange(format!("n = {n}"), "n ≥ 5".into()));
    }
    let (ni, mi) = (n as i64, m as i64);
    let sum_phi: Vec<(usize, i64)> = (4..=n).map(|j| (j, 1)).collect();
    match kind {
        OracleKind::SelRobin => {
            let mut single = PhiAffine::with_phi(
                9 * mi * ni * ni + (3 * mi + 12) * ni + 51 * mi + 118,
                &[(n, -1)],
            );
            let mut phisum = PhiAffine::with_phi(0, &sum_phi);
            phisum = {
                let mut p = PhiAffine::default();
                p.add(&phisum, mi + 3);
                p
            };
            single.add(&phisum, 1);
            single.add(&PhiAffine::with_phi(0, &[(n + 1, 1)]), 2 * mi);
            Ok(GateCost {
                single,
                cnot: (14 * mi + 27) * ni * ni + (20 * mi - 67) * ni + 42,
            })
        }
        OracleKind::SelPeriodic => {
            let mut single = PhiAffine::with_phi(
                9 * mi * ni * ni + (21 * mi + 12) * ni + 43 * mi + 83,
                &[(n - 1, 2)],
            );
            single.add(&PhiAffine::with_phi(0, &[(n, 1)]), mi - 2);
            let mut phisum = PhiAffine::default();
            phisum.add(&PhiAffine::with_phi(0, &sum_phi), mi + 2);
            single.add(&phisum, 1);
            Ok(GateCost {
                single,
                cnot: (14 * mi + 18) * ni * ni + (42 * mi - 30) * ni - 40 * mi - 24,
            })
        }
    }
}

/// Emit the one-step block multiset of the requested oracle at the given
/// register sizes and price it with the decomposition table.
pub fn gate_counts(kind: OracleKind, n: usize, m: usize) -> Result<GateCost> {
    use crate::fvm::{assemble_1d, BoundaryCondition, PdeProblem, Scheme};
    use std::sync::Arc;
    let bc = match kind {
        OracleKind::SelRobin => BoundaryCondition::dirichlet(0.0, 0.0),
        OracleKind::SelPeriodic => BoundaryCondition::Periodic,
    };
    let problem = PdeProblem {
        dim: 1,
        advection: vec![0.5],
        diffusion: vec![1.0],
        attenuation: 0.0,
        lengths: vec![1.0],
        bcs: vec![bc],
        scheme: Scheme::Central,
        qubits: vec![n],
        u0: Arc::new(|_| 1.0),
        source: None,
    };
    let op = assemble_1d(&problem, 0)?;
    let plan = LchsPlan::new(0.001, 0.4, m, Some(8.0))?;
    let spec = crate::circuits::SelectSpec::single(&op, &plan, 1.0, 1);
    let oracle = match kind {
        OracleKind::SelRobin => crate::circuits::sel_robin(&spec)?,
        OracleKind::SelPeriodic => crate::circuits::sel_periodic(&spec)?,
    };
    tally_cost(&oracle.blocks, n)
}

/// Step-count prescription for the homogeneous evolution.
#[allow(clippy::too_many_arguments)]
pub fn step_requirement(
    d: usize,
    a: f64,
    b: f64,
    h: f64,
    total_time: f64,
    eps: f64,
    delta: f64,
    diffusive: bool,
) -> usize {
    let df = d as f64;
    let r = if diffusive {
        df.sqrt() * b.powf(1.5) * total_time.powf(1.5) * (1.0 / eps).ln().sqrt()
            / (eps.sqrt() * delta.sqrt() * h.powi(3))
    } else {
        df.sqrt() * a.abs().powf(1.5) * total_time.powf(1.5) * (1.0 / eps).ln().sqrt()
            / (eps.sqrt() * delta.sqrt() * h.powf(1.5))
    };
    r.ceil().max(1.0) as usize
}

/// Step-count prescription for the source-term evolution.
#[allow(clippy::too_many_arguments)]
pub fn step_requirement_inhomogeneous(
    d: usize,
    a: f64,
    b: f64,
    h: f64,
    total_time: f64,
    eps: f64,
    delta: f64,
    radius: f64,
    f_sup: f64,
    diffusive: bool,
) -> usize {
    let df = d as f64;
    let common = df.sqrt() * radius.sqrt() * total_time.powi(2) * f_sup.sqrt()
        / (2.0 * 2f64.sqrt() * eps.sqrt() * delta.sqrt());
    let r = if diffusive {
        common * b.powf(1.5) / h.powi(3)
    } else {
        common * a.abs().powf(1.5) / h.powf(1.5)
    };
    r.ceil().max(1.0) as usize
}
