//! Independent reference computations used to cross-check the library.
//! Each one takes a different route from the code it checks.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use leonard_core::io::load_instance;
use leonard_core::matrix::{rank_of_vectors, Vector};
use leonard_core::{Context, ExactMatrix, FieldElement, FieldSpec};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_paths() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

/// Every fixture that describes a valid context, keyed by file stem.
pub fn fixture_contexts() -> Vec<(String, Context)> {
    fixture_paths()
        .into_iter()
        .filter_map(|p| {
            let inst = load_instance(&fs::read_to_string(&p).unwrap()).unwrap();
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            inst.context().ok().map(|c| (stem, c))
        })
        .collect()
}

/// `E = v w^T / (w^T v)` from a right and a left eigenvector of `theta`.
pub fn idempotent_from_eigenvectors(a: &ExactMatrix, theta: &FieldElement) -> Option<ExactMatrix> {
    let spec = a.spec();
    let shifted = a - &ExactMatrix::identity(spec, a.n()).scale(theta);
    let right = shifted.kernel_basis();
    let left = shifted.transpose().kernel_basis();
    if right.len() != 1 || left.len() != 1 {
        return None;
    }
    let (v, w) = (&right[0], &left[0]);
    let dot = v.iter().zip(w).fold(spec.zero(), |acc, (x, y)| &acc + &(x * y));
    let inv = dot.inv().ok()?;
    Some(ExactMatrix::outer(spec, v, w).scale(&inv))
}

/// `nz[i][j]` iff `E_i A* E_j != 0`, computed entrywise from the eigenvectors:
/// in the canonical model `E_i A* E_j = v_i (w_i^T A* v_j) w_j^T / (norms)`.
pub fn nonzero_table(ctx: &Context) -> Vec<Vec<bool>> {
    let n = ctx.n();
    let spec = ctx.spec();
    let vecs: Vec<(Vector, Vector)> = ctx
        .eigenvalues()
        .iter()
        .map(|t| {
            let shifted = ctx.a() - &ExactMatrix::identity(spec, n).scale(t);
            (shifted.kernel_basis().remove(0), shifted.transpose().kernel_basis().remove(0))
        })
        .collect();
    let theta_star = ctx.dual_eigenvalues();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let w = &vecs[i].1;
                    let v = &vecs[j].0;
                    let s = (0..n).fold(spec.zero(), |acc, k| &acc + &(&(&w[k] * &theta_star[k]) * &v[k]));
                    !s.is_zero()
                })
                .collect()
        })
        .collect()
}

/// Whether `order` satisfies the Leonard-system pattern against `nz`:
/// consecutive entries nonzero both ways, entries two or more apart zero.
pub fn is_system_order(nz: &[Vec<bool>], order: &[usize]) -> bool {
    let n = order.len();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let gap = a.abs_diff(b);
            gap == 0 || nz[order[a]][order[b]] == (gap == 1)
        })
    })
}

/// Brute-force search for an ordering that starts `i, j` and satisfies the pattern.
pub fn system_order_starting(nz: &[Vec<bool>], i: usize, j: usize) -> Option<Vec<usize>> {
    fn extend(nz: &[Vec<bool>], order: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = nz.len();
        if order.len() == n {
            return true;
        }
        let last = order.len();
        for c in 0..n {
            if used[c] {
                continue;
            }
            let fits =
                order.iter().enumerate().all(|(a, &x)| nz[x][c] == (last - a == 1) && nz[c][x] == (last - a == 1));
            if fits {
                used[c] = true;
                order.push(c);
                if extend(nz, order, used) {
                    return true;
                }
                order.pop();
                used[c] = false;
            }
        }
        false
    }
    if i == j || !(nz[i][j] && nz[j][i]) {
        return None;
    }
    let mut used = vec![false; nz.len()];
    used[i] = true;
    used[j] = true;
    let mut order = vec![i, j];
    extend(nz, &mut order, &mut used).then_some(order)
}

/// `(X^r)_ij` as a sum over walks of length `r` from `i` to `j` along nonzero entries.
pub fn walk_sum(x: &ExactMatrix, i: usize, j: usize, r: usize) -> FieldElement {
    let spec = x.spec();
    if r == 0 {
        return if i == j { spec.one() } else { spec.zero() };
    }
    let mut total = spec.zero();
    for k in 0..x.n() {
        let step = x.get(i, k);
        if !step.is_zero() {
            total = &total + &(step * &walk_sum(x, k, j, r - 1));
        }
    }
    total
}

/// The diagonal `D` with `D A = A^T D` and `D_00 = 1`, by the ratio recursion.
pub fn symmetrizer(a: &ExactMatrix) -> Vec<FieldElement> {
    let mut d = vec![a.spec().one()];
    for i in 0..a.n() - 1 {
        let next = &(&d[i] * a.get(i, i + 1)) / a.get(i + 1, i);
        d.push(next);
    }
    d
}

/// `(beta, gamma*, delta*)` read off `theta*` directly, `beta = 2` when free.
pub fn recurrence_constants(t: &[FieldElement]) -> Option<(FieldElement, FieldElement, FieldElement)> {
    let spec = t[0].spec();
    let d = t.len() - 1;
    let two = spec.from_i64(2);
    let beta = if d < 3 {
        two
    } else {
        // first window whose denominator is nonzero
        let mut found = None;
        for i in 1..d - 1 {
            let den = &t[i] - &t[i + 1];
            if !den.is_zero() {
                let num = &(&t[i - 1] + &t[i + 1]) - &(&t[i] + &t[i + 2]);
                found = Some(&num / &den);
                break;
            }
        }
        let b = found.unwrap_or(two);
        for i in 1..d - 1 {
            let lhs = &b * &(&t[i] - &t[i + 1]);
            let rhs = &(&t[i - 1] + &t[i + 1]) - &(&t[i] + &t[i + 2]);
            if lhs != rhs {
                return None;
            }
        }
        b
    };
    let gamma = if d == 1 { spec.zero() } else { &(&t[0] - &(&beta * &t[1])) + &t[2] };
    for i in 1..d {
        if &(&t[i - 1] - &(&beta * &t[i])) + &t[i + 1] != gamma {
            return None;
        }
    }
    let delta_at = |i: usize| {
        let (x, y) = (&t[i - 1], &t[i]);
        &(&(&(x * x) - &(&(&beta * x) * y)) + &(y * y)) - &(&gamma * &(x + y))
    };
    let delta = delta_at(1);
    if (2..=d).any(|i| delta_at(i) != delta) {
        return None;
    }
    Some((beta, gamma, delta))
}

/// The bracket matrix entrywise: in the canonical model
/// `C_ij = (th*_i - th*_j) A_ij (th*_i^2 - b th*_i th*_j + th*_j^2 - g (th*_i + th*_j) - dl)`.
pub fn bracket_entrywise(
    ctx: &Context,
    beta: &FieldElement,
    gamma: &FieldElement,
    delta: &FieldElement,
) -> ExactMatrix {
    let spec = ctx.spec();
    let n = ctx.n();
    let t = ctx.dual_eigenvalues();
    let mut c = ExactMatrix::zeros(spec, n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (&t[i], &t[j]);
            let poly = &(&(&(&(x * x) - &(&(beta * x) * y)) + &(y * y)) - &(gamma * &(x + y))) - delta;
            c.set(i, j, &(&(x - y) * ctx.a().get(i, j)) * &poly);
        }
    }
    c
}

/// Whether the span of `E_i V` for `i` in `s` is `A*`-invariant, by comparing ranks.
pub fn invariant_by_rank(ctx: &Context, s: &[usize]) -> bool {
    let n = ctx.n();
    let mut u: Vec<Vector> = Vec::new();
    for &i in s {
        u.extend(ctx.idempotent(i).column_space());
    }
    let base = rank_of_vectors(&u, n);
    let mut with_image = u.clone();
    with_image.extend(u.iter().map(|v| ctx.astar().mul_vec(v)));
    rank_of_vectors(&with_image, n) == base
}

pub fn spec_gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}
