//! Construction of irreducible character tables over `F_p`.
//!
//! Every group here has exponent `e` dividing `p − 1`, so `F_p` contains the
//! `e`-th roots of unity and each character value (a sum of such roots) has a
//! unique residue. Abelian groups are handled through their dual group;
//! everything else goes through simultaneous diagonalisation of the class
//! multiplication matrices.

use crate::groups::{mod_pow, ConjugacyClasses, FiniteGroup};
use crate::padic::is_prime;

use super::{CharsError, Result};

/// Smallest prime `p ≡ 1 (mod exponent)` with `p > 2·order²`.
pub fn dixon_prime(order: usize, exponent: usize) -> u64 {
    let e = exponent as u64;
    let floor = 2 * (order as u64).pow(2);
    let mut q = (floor / e) * e + 1;
    while q <= floor || !is_prime(q) {
        q += e;
    }
    q
}

fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A primitive `e`-th root of unity in `F_p`, for `e | p − 1`.
pub(crate) fn root_of_unity(p: u64, e: u64) -> u64 {
    let factors = prime_factors(p - 1);
    let generator = (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("F_p^× is cyclic");
    mod_pow(generator, (p - 1) / e, p)
}

/// Irreducible characters of an abelian group, as values per element.
///
/// `G` is built up one cyclic extension at a time: if `x ∉ H` and `m` is least
/// with `x^m ∈ H`, each character of `H` extends in exactly `m` ways to
/// `⟨H, x⟩`, by choosing `χ(x)` among the `m`-th roots of `χ(x^m)`.
pub(super) fn dual_group(group: &FiniteGroup, p: u64) -> Result<Vec<Vec<u64>>> {
    let n = group.order();
    let e = group.exponent() as u64;
    let z = root_of_unity(p, e);
    let roots: Vec<u64> = (0..e).map(|k| mod_pow(z, k, p)).collect();
    let id = group.identity();

    let mut in_h = vec![false; n];
    in_h[id] = true;
    let mut h_elems = vec![id];
    let mut chars: Vec<Vec<u64>> = vec![vec![0; n]];
    chars[0][id] = 1;

    while h_elems.len() < n {
        let x = (0..n).filter(|&x| !in_h[x]).max_by_key(|&x| group.element_order(x)).unwrap();
        let mut powers = vec![id, x];
        while !in_h[*powers.last().unwrap()] {
            powers.push(group.mul(*powers.last().unwrap(), x));
        }
        let xm = powers.pop().unwrap();
        let m = powers.len();

        let mut next = Vec::with_capacity(chars.len() * m);
        for chi in &chars {
            let c = chi[xm];
            let choices: Vec<u64> = roots.iter().copied().filter(|&r| mod_pow(r, m as u64, p) == c).collect();
            if choices.len() != m {
                return Err(CharsError::Table(format!("{} extensions instead of {m}", choices.len())));
            }
            for zeta in choices {
                let mut psi = chi.clone();
                let mut za = 1;
                for &xa in &powers[1..] {
                    za = za * zeta % p;
                    for &h in &h_elems {
                        psi[group.mul(h, xa)] = chi[h] * za % p;
                    }
                }
                next.push(psi);
            }
        }
        let new: Vec<usize> =
            powers[1..].iter().flat_map(|&xa| h_elems.iter().map(move |&h| (h, xa))).map(|(h, xa)| group.mul(h, xa)).collect();
        for y in new {
            in_h[y] = true;
            h_elems.push(y);
        }
        chars = next;
    }
    Ok(chars)
}

/// Row-reduced basis of a subspace of `F_p^r`, with pivot positions.
#[derive(Debug, Clone)]
struct Space {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Space {
    fn whole(r: usize) -> Self {
        let basis = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
        Space { basis, pivots: (0..r).collect() }
    }

    fn from_vectors(mut rows: Vec<Vec<u64>>, p: u64) -> Self {
        let pivots = row_reduce(&mut rows, p);
        rows.truncate(pivots.len());
        Space { basis: rows, pivots }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// In-place reduced row echelon form; returns pivot columns.
fn row_reduce(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, i);
        let t = inv(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * t % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of a square matrix.
fn nullspace(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.first().map_or(0, Vec::len);
    let pivots = row_reduce(&mut m, p);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[row][free]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low degree first, monic) via Hessenberg form.
fn charpoly(mut a: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = a.len();
    for k in 1..n.saturating_sub(1) {
        let Some(i) = (k..n).find(|&i| a[i][k - 1] != 0) else { continue };
        if i != k {
            a.swap(i, k);
            for row in a.iter_mut() {
                row.swap(i, k);
            }
        }
        let t = inv(a[k][k - 1], p);
        for i in k + 1..n {
            let u = a[i][k - 1] * t % p;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                a[i][j] = (a[i][j] + (p - u) * a[k][j]) % p;
            }
            for row in a.iter_mut() {
                row[k] = (row[k] + u * row[i]) % p;
            }
        }
    }
    // polys[k] is the characteristic polynomial of the leading k×k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + (p - a[k][k]) * c) % p;
        }
        let mut prod = 1;
        for i in (0..k).rev() {
            prod = prod * a[i + 1][i] % p;
            let coef = a[i][k] * prod % p;
            if coef != 0 {
                for (j, &c) in polys[i].iter().enumerate() {
                    next[j] = (next[j] + (p - coef) * c) % p;
                }
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn eval(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Splits an invariant subspace into eigenspaces of `op`.
fn split(space: &Space, op: &[Vec<u64>], p: u64) -> Result<Vec<Space>> {
    let m = space.dim();
    let r = op.len();
    let images: Vec<Vec<u64>> = space
        .basis
        .iter()
        .map(|b| (0..r).map(|k| (0..r).fold(0, |acc, l| (acc + op[k][l] * b[l]) % p)).collect())
        .collect();
    // restricted[i][j] = coordinate i of op(b_j)
    let restricted: Vec<Vec<u64>> =
        (0..m).map(|i| (0..m).map(|j| images[j][space.pivots[i]]).collect()).collect();
    let poly = charpoly(restricted.clone(), p);

    let mut parts = Vec::new();
    let mut total = 0;
    for lambda in (0..p).filter(|&x| eval(&poly, x, p) == 0) {
        let mut shifted = restricted.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = (row[i] + p - lambda) % p;
        }
        let coords = nullspace(shifted, p);
        let vectors: Vec<Vec<u64>> = coords
            .iter()
            .map(|u| (0..r).map(|k| (0..m).fold(0, |acc, i| (acc + u[i] * space.basis[i][k]) % p)).collect())
            .collect();
        total += vectors.len();
        parts.push(Space::from_vectors(vectors, p));
    }
    if total != m {
        return Err(CharsError::Table("class algebra is not split over the chosen prime".into()));
    }
    Ok(parts)
}

/// Irreducible characters by simultaneous diagonalisation of the class
/// matrices `(M_j)_{kl} = #{x ∈ K_j : x⁻¹·g_l ∈ K_k}`.
///
/// A common eigenvector normalised to 1 on the identity class is
/// `w_k = h_k·χ(g_k)/χ(1)`, and `Σ_k w_k·w_{k*}/h_k = |G|/χ(1)²`.
/// Returns `(degree, values per class)`.
pub(super) fn dixon(group: &FiniteGroup, classes: &ConjugacyClasses, p: u64) -> Result<Vec<(u64, Vec<u64>)>> {
    let n = group.order();
    let r = classes.len();
    let reps = classes.representatives();
    let mats: Vec<Vec<Vec<u64>>> = (0..r)
        .map(|j| {
            let mut m = vec![vec![0; r]; r];
            for (l, &gl) in reps.iter().enumerate() {
                for x in classes.members(j) {
                    m[classes.class_of(group.mul(group.inv(x), gl))][l] += 1;
                }
            }
            m
        })
        .collect();

    let mut spaces = vec![Space::whole(r)];
    for op in mats.iter().skip(1) {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let mut next = Vec::with_capacity(r);
        for s in &spaces {
            if s.dim() == 1 {
                next.push(s.clone());
            } else {
                next.extend(split(s, op, p)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(CharsError::Table("class matrices do not separate the characters".into()));
    }

    let sizes: Vec<u64> = classes.sizes().iter().map(|&h| h as u64).collect();
    let inverse_class: Vec<usize> = reps.iter().map(|&g| classes.class_of(group.inv(g))).collect();
    let max_degree = (1..=n as u64).take_while(|d| d * d <= n as u64).last().unwrap();
    spaces
        .into_iter()
        .map(|s| {
            let v = &s.basis[0];
            let t = inv(v[0], p);
            let w: Vec<u64> = v.iter().map(|&x| x * t % p).collect();
            let s_sum = (0..r).fold(0, |acc, k| (acc + w[k] * w[inverse_class[k]] % p * inv(sizes[k], p)) % p);
            let d2 = (n as u64 % p) * inv(s_sum, p) % p;
            let d = (1..=max_degree)
                .find(|&d| d * d % p == d2)
                .ok_or_else(|| CharsError::Table("character degree not recognised".into()))?;
            let values = (0..r).map(|k| w[k] * d % p * inv(sizes[k], p) % p).collect();
            Ok((d, values))
        })
        .collect()
}
