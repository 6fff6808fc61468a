//! Dense-matrix conjugation oracle: `R = exp(-i pi P / 4)` for the single-qubit
//! rotations and explicit permutation matrices for SWAP.

use num_complex::Complex64 as C;
use tomocover::clifford::{Generator, ReadoutOp};
use tomocover::pauli::{Letter, PauliString};

pub type Mat = Vec<Vec<C>>;

pub fn zeros(d: usize) -> Mat {
    vec![vec![C::new(0.0, 0.0); d]; d]
}

pub fn eye(d: usize) -> Mat {
    let mut m = zeros(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

pub fn letter(l: Letter) -> Mat {
    let (o, i) = (C::new(1.0, 0.0), C::new(0.0, 1.0));
    let z = C::new(0.0, 0.0);
    match l {
        Letter::I => vec![vec![o, z], vec![z, o]],
        Letter::X => vec![vec![z, o], vec![o, z]],
        Letter::Y => vec![vec![z, -i], vec![i, z]],
        Letter::Z => vec![vec![o, z], vec![z, -o]],
    }
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut c = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn dagger(a: &Mat) -> Mat {
    let d = a.len();
    let mut c = zeros(d);
    for i in 0..d {
        for j in 0..d {
            c[i][j] = a[j][i].conj();
        }
    }
    c
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (da, db) = (a.len(), b.len());
    let mut c = zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    c[i * db + k][j * db + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    c
}

/// Qubit 1 is the leftmost tensor factor.
pub fn pauli_matrix(p: &PauliString) -> Mat {
    p.letters().fold(eye(1), |acc, l| kron(&acc, &letter(l)))
}

pub fn rotation(axis: Letter) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let p = letter(axis);
    let mut r = zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            r[i][j] = C::new(s * id, 0.0) - C::new(0.0, s) * p[i][j];
        }
    }
    r
}

pub fn on_qubit(n: usize, q: usize, m: &Mat) -> Mat {
    let id = letter(Letter::I);
    (1..=n).fold(eye(1), |acc, k| kron(&acc, if k == q { m } else { &id }))
}

pub fn swap(n: usize, a: usize, b: usize) -> Mat {
    let d = 1 << n;
    let mut m = zeros(d);
    let bit = |q: usize| n - q; // qubit 1 is the most significant bit
    for s in 0..d {
        let (x, y) = ((s >> bit(a)) & 1, (s >> bit(b)) & 1);
        let t = (s & !(1 << bit(a)) & !(1 << bit(b))) | (y << bit(a)) | (x << bit(b));
        m[t][s] = C::new(1.0, 0.0);
    }
    m
}

pub fn generator_matrix(n: usize, g: Generator) -> Mat {
    match g {
        Generator::Identity => eye(1 << n),
        Generator::Rx(q) => on_qubit(n, q, &rotation(Letter::X)),
        Generator::Ry(q) => on_qubit(n, q, &rotation(Letter::Y)),
        Generator::Rz(q) => on_qubit(n, q, &rotation(Letter::Z)),
        Generator::Swap(a, b) => swap(n, a, b),
    }
}

/// `A*B` acts with `B` first, so the unitary is the product in written order.
pub fn word_matrix(n: usize, word: &[Generator]) -> Mat {
    word.iter().fold(eye(1 << n), |acc, g| mul(&acc, &generator_matrix(n, *g)))
}

/// Real `s` with `m = s * p`, if one exists.
pub fn proportional(m: &Mat, p: &Mat) -> Option<f64> {
    let d = m.len();
    let (i, j) = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .find(|&(i, j)| p[i][j].norm() > 0.5)?;
    let s = m[i][j] / p[i][j];
    for i in 0..d {
        for j in 0..d {
            if (m[i][j] - s * p[i][j]).norm() > 1e-9 {
                return None;
            }
        }
    }
    (s.im.abs() < 1e-9).then_some(s.re)
}

pub fn oracle_image(n: usize, word: &[Generator], p: &PauliString) -> Mat {
    let u = word_matrix(n, word);
    mul(&mul(&u, &pauli_matrix(p)), &dagger(&u))
}

pub fn assert_matches(n: usize, word: &[Generator], p: &PauliString) {
    let op = ReadoutOp::from_word(n, word).unwrap();
    let image = op.conjugate(p).unwrap();
    let m = oracle_image(n, word, p);
    let s = proportional(&m, &pauli_matrix(&image))
        .unwrap_or_else(|| panic!("{op} on {p}: table gives {image}, matrix disagrees"));
    assert!((s.abs() - 1.0).abs() < 1e-9, "{op} on {p}: scale {s}");
}

