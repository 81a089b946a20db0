#![allow(dead_code)]

use num_complex::Complex64;
use phonon_discord::linalg::{cmat_dagger, cmat_mul, kron2, CMat4};
use phonon_discord::{x_state, TwoQubitState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn hermitize_normalize(m: CMat4) -> TwoQubitState {
    let mut out = m;
    let tr: f64 = (0..4).map(|i| m[i][i].re).sum();
    for i in 0..4 {
        out[i][i] = Complex64::new(m[i][i].re / tr, 0.0);
        for j in i + 1..4 {
            let z = (m[i][j] + m[j][i].conj()) * (0.5 / tr);
            out[i][j] = z;
            out[j][i] = z.conj();
        }
    }
    TwoQubitState::new(out).expect("generated state is valid")
}

/// Haar-random pure two-qubit state.
pub fn random_pure(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let psi: [Complex64; 4] = std::array::from_fn(|_| gaussian(rng));
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = psi[i] * psi[j].conj();
        }
    }
    hermitize_normalize(m)
}

/// Ginibre-ensemble mixed state `G G† / Tr`, with `G` of the given column rank.
pub fn random_mixed(rng: &mut ChaCha8Rng, rank: usize) -> TwoQubitState {
    let mut g = [[Complex64::new(0.0, 0.0); 4]; 4];
    for row in g.iter_mut() {
        for z in row.iter_mut().take(rank) {
            *z = gaussian(rng);
        }
    }
    hermitize_normalize(cmat_mul(&g, &cmat_dagger(&g)))
}

/// Random pure state or Ginibre mixture of random rank.
pub fn random_state(rng: &mut ChaCha8Rng) -> TwoQubitState {
    match rng.gen_range(0..4) {
        0 => random_pure(rng),
        r => random_mixed(rng, r + 1),
    }
}

/// Haar-random single-qubit unitary.
pub fn random_unitary2(rng: &mut ChaCha8Rng) -> [[Complex64; 2]; 2] {
    let a = gaussian(rng);
    let b = gaussian(rng);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    [[a, -b.conj() * phase], [b, a.conj() * phase]]
}

pub fn local_rotate(
    rho: &TwoQubitState,
    u: &[[Complex64; 2]; 2],
    v: &[[Complex64; 2]; 2],
) -> TwoQubitState {
    let w = kron2(u, v);
    hermitize_normalize(cmat_mul(&cmat_mul(&w, rho.matrix()), &cmat_dagger(&w)))
}

fn random_qubit_density(rng: &mut ChaCha8Rng) -> [[Complex64; 2]; 2] {
    // Bloch vector uniform in the ball
    let r: f64 = rng.gen::<f64>().cbrt();
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    let (x, y, z) = (r * s * phi.cos(), r * s * phi.sin(), r * z);
    [
        [
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
        ],
        [
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    ]
}

/// `ρ_A ⊗ ρ_B` with independent random marginals.
pub fn random_product(rng: &mut ChaCha8Rng) -> TwoQubitState {
    hermitize_normalize(kron2(
        &random_qubit_density(rng),
        &random_qubit_density(rng),
    ))
}

/// `Σ p_ij |a_i⟩⟨a_i| ⊗ |b_j⟩⟨b_j|` in random local bases.
pub fn random_classical_classical(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let p: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
    let total: f64 = p.iter().sum();
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        m[i][i] = Complex64::new(p[i] / total, 0.0);
    }
    let diag = hermitize_normalize(m);
    let u = random_unitary2(rng);
    let v = random_unitary2(rng);
    local_rotate(&diag, &u, &v)
}

/// Parameters `(a, b, c, x, y)` of a random valid X-state.
pub fn random_x_params(rng: &mut ChaCha8Rng) -> (f64, f64, f64, Complex64, Complex64) {
    let w: [f64; 3] = std::array::from_fn(|_| -rng.gen::<f64>().ln());
    let total = w[0] + w[1] + w[2];
    let (a, c) = (w[0] / total, w[2] / total);
    let b = 0.5 * w[1] / total;
    let x = Complex64::from_polar(
        b * rng.gen::<f64>(),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let y = Complex64::from_polar(
        (a * c).sqrt() * rng.gen::<f64>(),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    (a, b, c, x, y)
}

pub fn random_x_state(
    rng: &mut ChaCha8Rng,
) -> ((f64, f64, f64, Complex64, Complex64), TwoQubitState) {
    loop {
        let p = random_x_params(rng);
        if let Ok(s) = x_state(p.0, p.1, p.2, p.3, p.4) {
            return (p, s);
        }
    }
}

/// Trace distance `½‖a − b‖₁`.
pub fn trace_distance(a: &CMat4, b: &CMat4) -> f64 {
    let mut d = *a;
    for i in 0..4 {
        for j in 0..4 {
            d[i][j] -= b[i][j];
        }
    }
    let eig = phonon_discord::linalg::jacobi_hermitian(&d);
    0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>()
}

/// `ρ_A ⊗ ρ_B` built from the marginals of `rho`.
pub fn marginal_product(rho: &TwoQubitState) -> CMat4 {
    let (a, b) = rho.marginals();
    kron2(&a, &b)
}
