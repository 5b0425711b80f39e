//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use respeak_core::TokenSequence;

pub const DEFAULT_SEED: u64 = 0x5eed_2015;

pub fn seed() -> u64 {
    std::env::var("RESPEAK_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn words(rng: &mut impl Rng, len: usize, vocab: usize) -> TokenSequence {
    (0..len)
        .map(|_| format!("w{}", rng.gen_range(0..vocab)))
        .collect()
}

pub fn seq(s: &str) -> TokenSequence {
    TokenSequence::from_whitespace(s)
}

// ---- linear algebra: normal equations with an adjugate inverse ----

pub fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][j] * determinant(&minor(m, 0, j))
        })
        .sum()
}

fn minor(m: &[Vec<f64>], row: usize, col: usize) -> Vec<Vec<f64>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect()
}

#[allow(clippy::needless_range_loop)]
pub fn inverse(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let det = determinant(m);
    if n == 1 {
        return vec![vec![1.0 / det]];
    }
    let mut inv = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[j][i] = sign * determinant(&minor(m, i, j)) / det;
        }
    }
    inv
}

/// Coefficients (intercept first) from `(XᵀX)⁻¹ Xᵀy`.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let design: Vec<Vec<f64>> = x
        .iter()
        .map(|row| std::iter::once(1.0).chain(row.iter().copied()).collect())
        .collect();
    let p = design[0].len();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (row, &yi) in design.iter().zip(y) {
        for a in 0..p {
            xty[a] += row[a] * yi;
            for b in 0..p {
                xtx[a][b] += row[a] * row[b];
            }
        }
    }
    let inv = inverse(&xtx);
    (0..p).map(|a| (0..p).map(|b| inv[a][b] * xty[b]).sum()).collect()
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}

// ---- Student t tail by quadrature ----

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    let tol = (tol / 2.0).max(1e-15);
    simpson(f, a, m, fa, flm, fm, left, tol, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol, depth - 1)
}

pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 30)
}

/// Two-sided tail `P(|T| > t)` for `df` degrees of freedom. Substituting
/// `x = tan θ` maps the unnormalized density onto a bounded integrand on
/// `[0, π/2]`, and normalizing by the full integral avoids the gamma function.
pub fn t_two_sided_by_quadrature(t: f64, df: u64) -> f64 {
    let nu = df as f64;
    let g = move |theta: f64| {
        let (s, c) = theta.sin_cos();
        let c = c.max(0.0);
        let base = c * c + s * s / nu;
        if df == 1 {
            return 1.0 / base;
        }
        ((nu - 1.0) * c.ln() - (nu + 1.0) / 2.0 * base.ln()).exp()
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let lo = t.abs().atan();
    // split at the bulk so the peak for large df is resolved
    let knee = (4.0 / nu.sqrt()).atan().min(half_pi);
    let integrate = |a: f64, b: f64| {
        if a >= knee {
            adaptive_simpson(&g, a, b, 1e-12)
        } else {
            adaptive_simpson(&g, a, knee.min(b), 1e-12) + adaptive_simpson(&g, knee.min(b), b, 1e-12)
        }
    };
    let total = integrate(0.0, half_pi);
    (integrate(lo, half_pi) / total).clamp(0.0, 1.0)
}

// ---- TER: exhaustive shifts + Levenshtein ----

#[allow(clippy::needless_range_loop)]
fn levenshtein(a: &[u8], b: &[u8]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

/// Minimum of `shifts + levenshtein` over every arrangement reachable by
/// arbitrary block moves, searched breadth first so each arrangement is met
/// at its fewest shifts.
pub fn exhaustive_ter_edits(hyp: &[u8], reference: &[u8]) -> usize {
    let mut best = levenshtein(hyp, reference);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([hyp.to_vec()]);
    let mut frontier = vec![hyp.to_vec()];
    let mut depth = 0;
    while !frontier.is_empty() && depth + 1 < best {
        depth += 1;
        let mut next = Vec::new();
        for state in &frontier {
            let n = state.len();
            for start in 0..n {
                for len in 1..=n - start {
                    let block = &state[start..start + len];
                    let mut rest = state[..start].to_vec();
                    rest.extend_from_slice(&state[start + len..]);
                    for dest in 0..=rest.len() {
                        if dest == start {
                            continue;
                        }
                        let mut moved = rest[..dest].to_vec();
                        moved.extend_from_slice(block);
                        moved.extend_from_slice(&rest[dest..]);
                        if seen.insert(moved.clone()) {
                            best = best.min(depth + levenshtein(&moved, reference));
                            next.push(moved);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    best
}

// ---- rank statistics by enumeration ----

/// Kendall tau as (concordant − discordant) over all pairs.
pub fn brute_tau(p: &[usize]) -> f64 {
    let n = p.len();
    let mut score: i64 = 0;
    for i in 0..n {
        for j in i + 1..n {
            score += if p[j] > p[i] { 1 } else { -1 };
        }
    }
    score as f64 / (n * (n - 1) / 2) as f64
}

/// Spearman rho from squared rank differences; a rank is the number of
/// smaller values.
pub fn brute_rho(p: &[usize]) -> f64 {
    let n = p.len();
    let d2: usize = (0..n)
        .map(|i| {
            let rank = p.iter().filter(|&&v| v < p[i]).count();
            rank.abs_diff(i).pow(2)
        })
        .sum();
    1.0 - 6.0 * d2 as f64 / (n * (n * n - 1)) as f64
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn value_map(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
