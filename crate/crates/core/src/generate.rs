//! Tournament generators.

use rand::seq::index;
use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::error::{invalid, Result};
use crate::tournament::{Tournament, Vertex};

/// Largest order accepted by [`enumerate_tournaments`].
pub const MAX_ENUMERATION_ORDER: usize = 6;

/// Random tournament: each pair `i < j`, in lexicographic order, consumes one
/// splitmix64 output; its top bit set means `i -> j`.
pub fn random_tournament(n: usize, seed: u64) -> Result<Tournament> {
    if n == 0 {
        return invalid("random tournament needs n >= 1");
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    Ok(Tournament::from_fn(n, |_, _| rng.next_u64() >> 63 == 1))
}

/// Circulant tournament: `i -> j` iff `(j - i) mod n` is in `symbols`.
pub fn rotational_tournament(n: usize, symbols: &[usize]) -> Result<Tournament> {
    if n.is_multiple_of(2) {
        return invalid(format!("rotational tournament needs odd n, got {n}"));
    }
    let mut member = vec![false; n];
    for &d in symbols {
        if d == 0 || d >= n {
            return invalid(format!("symbol {d} outside 1..{n}"));
        }
        if member[d] {
            return invalid(format!("symbol {d} repeated"));
        }
        member[d] = true;
    }
    for d in 1..n {
        if member[d] == member[n - d] {
            return invalid(format!("exactly one of {d} and {} must be a symbol", n - d));
        }
    }
    Ok(Tournament::from_fn(n, |i, j| member[(j + n - i) % n]))
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Nonzero quadratic residues modulo `q`, ascending.
pub fn quadratic_residues(q: usize) -> Vec<usize> {
    let mut r: Vec<usize> = (1..q).map(|x| x * x % q).collect();
    r.sort_unstable();
    r.dedup();
    r
}

/// Paley tournament on `q` vertices, `q` a prime with `q ≡ 3 (mod 4)`.
pub fn paley_tournament(q: usize) -> Result<Tournament> {
    if !is_prime(q) || q % 4 != 3 {
        return invalid(format!("Paley tournament needs a prime q ≡ 3 mod 4, got {q}"));
    }
    rotational_tournament(q, &quadratic_residues(q))
}

/// All `2^C(n,2)` labelled tournaments on `n` vertices. Tournament number
/// `m` orients the `b`-th pair (lexicographic order) forward iff bit `b` of
/// `m` is set.
pub fn enumerate_tournaments(n: usize) -> Result<impl Iterator<Item = Tournament>> {
    if n > MAX_ENUMERATION_ORDER {
        return invalid(format!("enumeration is capped at n = {MAX_ENUMERATION_ORDER}, got {n}"));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    Ok((0u64..1 << pairs).map(move |m| {
        let mut b = 0;
        Tournament::from_fn(n, |_, _| {
            let fwd = m >> b & 1 == 1;
            b += 1;
            fwd
        })
    }))
}

/// Disjoint random source and sink lists of size `k`.
pub fn random_terminals(n: usize, k: usize, seed: u64) -> Result<(Vec<Vertex>, Vec<Vertex>)> {
    if k == 0 || 2 * k > n {
        return invalid(format!("cannot pick {k} sources and {k} sinks among {n} vertices"));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, n, 2 * k).into_vec();
    let sinks = picked.split_off(k);
    Ok((picked, sinks))
}
