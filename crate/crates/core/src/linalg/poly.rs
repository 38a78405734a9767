//! Integer polynomials: characteristic polynomials via the division-free
//! Berkowitz scheme, and exact root counting on rational intervals with
//! Sturm chains (pseudo-remainder sequences with content stripping).

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// Dense integer polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<Int>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &Int {
        self.coeffs.last().expect("leading of zero polynomial")
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Int::from(i as u64 + 1))
                .collect(),
        )
    }

    fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by the positive content; leading sign preserved.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let g = self.content();
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Sign of `p(num/den)` with `den > 0`, via homogenized integer
    /// evaluation: sign of `sum c_i num^i den^(deg-i)`.
    pub fn sign_at(&self, x: &Rat) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let num = x.numer();
        let den = x.denom();
        let d = self.degree();
        let mut num_pow = Int::one();
        let mut total = Int::zero();
        let mut den_pows = vec![Int::one(); d + 1];
        for i in (0..d).rev() {
            den_pows[i] = &den_pows[i + 1] * den;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            total += c * &num_pow * &den_pows[i];
            num_pow *= num;
        }
        match total.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Multiplicity of the root 0, with the remaining factor.
    pub fn strip_zero_roots(&self) -> (usize, IntPoly) {
        let z = self
            .coeffs
            .iter()
            .take_while(|c| c.is_zero())
            .count()
            .min(self.coeffs.len());
        (z, IntPoly::new(self.coeffs[z..].to_vec()))
    }
}

/// Pseudo-remainder of `f` by `g`. Returns `(r, flip)` where `r` is a
/// positive-scalar multiple of the true remainder when `flip` is false,
/// and a negative-scalar multiple when true.
fn pseudo_rem(f: &IntPoly, g: &IntPoly) -> (IntPoly, bool) {
    assert!(!g.is_zero());
    let lg = g.leading().clone();
    let dg = g.degree();
    let mut r = f.clone();
    let mut steps = 0usize;
    while !r.is_zero() && r.degree() >= dg {
        let dr = r.degree();
        let lr = r.leading().clone();
        let mut coeffs = vec![Int::zero(); dr + 1];
        for (i, c) in r.coeffs.iter().enumerate() {
            coeffs[i] = c * &lg;
        }
        for (i, c) in g.coeffs.iter().enumerate() {
            coeffs[i + dr - dg] -= c * &lr;
        }
        r = IntPoly::new(coeffs);
        steps += 1;
    }
    let flip = lg.is_negative() && steps % 2 == 1;
    (r, flip)
}

/// Primitive polynomial gcd with positive leading coefficient.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut f = a.primitive();
    let mut g = b.primitive();
    if f.is_zero() {
        return normalize_sign(g);
    }
    while !g.is_zero() {
        let (r, _) = pseudo_rem(&f, &g);
        f = g;
        g = r.primitive();
    }
    normalize_sign(f)
}

fn normalize_sign(p: IntPoly) -> IntPoly {
    if !p.is_zero() && p.leading().is_negative() {
        IntPoly::new(p.coeffs.iter().map(|c| -c).collect())
    } else {
        p
    }
}

/// Sturm chain of `p`: `p, p', -rem(...), ...`, each made primitive with
/// only positive scalings so that sign variations are preserved.
fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.primitive()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.primitive());
    loop {
        let n = chain.len();
        let (r, flip) = pseudo_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_zero() {
            break;
        }
        let r = r.primitive();
        let next = if flip {
            r
        } else {
            IntPoly::new(r.coeffs.iter().map(|c| -c).collect())
        };
        chain.push(next);
    }
    chain
}

fn variations(chain: &[IntPoly], x: &Rat) -> usize {
    let mut count = 0;
    let mut last: i8 = 0;
    for p in chain {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Fully deflate the rational root `b` out of `p`; `None` when `p(b) != 0`.
fn deflate_root(p: &IntPoly, b: &Rat) -> Option<(usize, IntPoly)> {
    if p.sign_at(b) != 0 {
        return None;
    }
    // Divide by (den*t - num), integral by Gauss's lemma after making the
    // dividend primitive; the stripped content cannot hide the root.
    let num = b.numer().clone();
    let den = b.denom().clone();
    let mut q = p.primitive();
    let mut mult = 0;
    while q.sign_at(b) == 0 && q.degree() >= 1 {
        let d = q.degree();
        let mut out = vec![Int::zero(); d];
        // synthetic division, descending
        let mut carry = Int::zero();
        for i in (0..d).rev() {
            // coefficient of t^{i+1} in remaining dividend
            let c = &q.coeffs[i + 1] + &carry;
            let (quot, rem) = c.div_rem(&den);
            debug_assert!(rem.is_zero());
            out[i] = quot.clone();
            carry = quot * &num;
        }
        debug_assert!((&q.coeffs[0] + &carry).is_zero());
        q = IntPoly::new(out).primitive();
        mult += 1;
    }
    Some((mult, q))
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`.
/// Requires `p(a) != 0`; an endpoint root at `b` is deflated and counted
/// explicitly.
pub fn distinct_roots_in(p: &IntPoly, a: &Rat, b: &Rat) -> usize {
    assert!(a < b);
    assert!(p.sign_at(a) != 0, "left endpoint is a root");
    if p.degree() == 0 || p.is_zero() {
        return 0;
    }
    let (endpoint, q) = match deflate_root(p, b) {
        Some((_, q)) => (1, q),
        None => (0, p.clone()),
    };
    if q.degree() == 0 {
        return endpoint;
    }
    let chain = sturm_chain(&q);
    let va = variations(&chain, a);
    let vb = variations(&chain, b);
    endpoint + va.saturating_sub(vb)
}

/// Number of roots of `p` in `(0, eps]`, counted with multiplicity, after
/// splitting off the root at zero. Returns `(zero_multiplicity, count)`.
pub fn count_positive_roots_upto(p: &IntPoly, eps: &Rat) -> (usize, usize) {
    assert!(!p.is_zero());
    let (z, q) = p.strip_zero_roots();
    let zero = Rat::from(Int::zero());
    let mut total = 0;
    let mut g = q;
    while g.degree() > 0 {
        total += distinct_roots_in(&g, &zero, eps);
        g = poly_gcd(&g, &g.derivative());
    }
    (z, total)
}

/// Characteristic polynomial `det(tI - A)` by the Berkowitz algorithm
/// (division-free; exact for integer matrices).
pub fn charpoly(a: &[Vec<Int>]) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::new(vec![Int::one()]);
    }
    // Coefficients kept in descending order during the iteration.
    let mut p = vec![Int::one(), -a[0][0].clone()];
    for r in 1..n {
        let mut col = Vec::with_capacity(r + 2);
        col.push(Int::one());
        col.push(-a[r][r].clone());
        let c: Vec<Int> = (0..r).map(|i| a[i][r].clone()).collect();
        let row: Vec<Int> = (0..r).map(|j| a[r][j].clone()).collect();
        let mut v = c;
        for k in 0..r {
            let dot: Int = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            col.push(-dot);
            if k + 1 < r {
                let mut nv = vec![Int::zero(); r];
                for (i, slot) in nv.iter_mut().enumerate() {
                    *slot = (0..r).map(|j| &a[i][j] * &v[j]).sum();
                }
                v = nv;
            }
        }
        let mut pnew = vec![Int::zero(); r + 2];
        for (i, slot) in pnew.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *slot += &col[i - j] * pj;
                }
            }
        }
        p = pnew;
    }
    p.reverse();
    IntPoly::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn poly(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    #[test]
    fn charpoly_small() {
        // [[1,2],[2,5]] -> t^2 - 6t + 1
        let a = vec![
            vec![Int::from(1), Int::from(2)],
            vec![Int::from(2), Int::from(5)],
        ];
        assert_eq!(charpoly(&a), poly(&[1, -6, 1]));
        // diagonal
        let a = vec![
            vec![Int::from(2), Int::from(0)],
            vec![Int::from(0), Int::from(3)],
        ];
        assert_eq!(charpoly(&a), poly(&[6, -5, 1]));
        // 3x3 zero matrix -> t^3
        let a = vec![vec![Int::zero(); 3]; 3];
        assert_eq!(charpoly(&a), poly(&[0, 0, 0, 1]));
    }

    #[test]
    fn sturm_counts() {
        // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
        let p = poly(&[-6, 11, -6, 1]);
        assert_eq!(distinct_roots_in(&p, &rat(0, 1), &rat(5, 1)), 3);
        assert_eq!(distinct_roots_in(&p, &rat(0, 1), &rat(2, 1)), 2);
        assert_eq!(distinct_roots_in(&p, &rat(3, 2), &rat(2, 1)), 1);
        assert_eq!(distinct_roots_in(&p, &rat(0, 1), &rat(1, 2)), 0);
    }

    #[test]
    fn multiplicity_counting() {
        // t^2 (t-1)^3 (t-3)
        let base = poly(&[0, 0, 1]); // t^2
        let cube = {
            // (t-1)^3 = t^3 - 3t^2 + 3t - 1
            poly(&[-1, 3, -3, 1])
        };
        let lin = poly(&[-3, 1]);
        let prod = mul(&mul(&base, &cube), &lin);
        let (z, count) = count_positive_roots_upto(&prod, &rat(2, 1));
        assert_eq!(z, 2);
        assert_eq!(count, 3); // root 1 with multiplicity 3
        let (_, count_all) = count_positive_roots_upto(&prod, &rat(3, 1));
        assert_eq!(count_all, 4); // endpoint root 3 included
    }

    #[test]
    fn eigenvalue_example() {
        // [[1,2],[2,5]]: eigenvalues 3 +- 2*sqrt(2); only 3-2√2≈0.17 in (0,1/4]
        let a = vec![
            vec![Int::from(1), Int::from(2)],
            vec![Int::from(2), Int::from(5)],
        ];
        let p = charpoly(&a);
        let (z, n_eps) = count_positive_roots_upto(&p, &rat(1, 4));
        assert_eq!(z, 0);
        assert_eq!(n_eps, 1);
    }

    fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_zero() || b.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Int::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        IntPoly::new(out)
    }
}
