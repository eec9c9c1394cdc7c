use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Pow, Zero};

/// `4 * 12^((2n - 5) / 3)`.
pub fn lower_bound_simple(n: u32) -> f64 {
    4.0 * 12f64.powf((2.0 * n as f64 - 5.0) / 3.0)
}

/// The least integer `m >= lower_bound_simple(n)`, computed exactly:
/// `m^3 * 12^max(0, 5-2n) >= 64 * 12^max(0, 2n-5)`.
pub fn lower_bound_simple_ceil(n: u32) -> BigUint {
    let e = 2 * n as i64 - 5;
    let twelve = BigUint::from(12u32);
    let rhs = BigUint::from(64u32) * Pow::pow(&twelve, e.max(0) as u32);
    let scale = Pow::pow(&twelve, (-e).max(0) as u32);
    let mut m = (&rhs / &scale).cbrt();
    while &m * &m * &m * &scale < rhs {
        m += 1u32;
    }
    while !m.is_zero() {
        let below = &m - 1u32;
        if &below * &below * &below * &scale >= rhs {
            m = below;
        } else {
            break;
        }
    }
    m
}

/// Words of length `n - 1` built from `XYYX -> XXYY -> XYXY -> XYYX` cycles
/// interleaved with `XXYY` self-loops:
/// the sum over `k` of `2^k 6^(2h+1) 4^h C(h+k, h)` when `n-k-1 = 3h+1`,
/// `2^k 6^(2h+1) 4^(h+1) C(h+k, h)` when `n-k-1 = 3h+2`, and nothing when
/// `3` divides `n-k-1`.
pub fn lower_bound_refined(n: u32) -> BigUint {
    assert!(n >= 2, "the open chain needs n >= 2");
    let two = BigUint::from(2u32);
    let six = BigUint::from(6u32);
    let four = BigUint::from(4u32);
    let mut total = BigUint::zero();
    for k in 0..=n - 2 {
        let rest = n - k - 1;
        let h = rest / 3;
        let tail = match rest % 3 {
            0 => continue,
            1 => BigUint::one(),
            _ => four.clone(),
        };
        let choose = binomial(BigUint::from(h + k), BigUint::from(h));
        total += Pow::pow(&two, k) * Pow::pow(&six, 2 * h + 1) * Pow::pow(&four, h) * tail * choose;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperBounds {
    /// `9^n` colourings of the open chain.
    pub open_chain: BigUint,
    /// `18^n` oriented polyhedra over a fixed four-valent graph.
    pub per_graph: BigUint,
    /// `18^n * (4n - 1)!!` over all four-valent graphs.
    pub total: BigUint,
}

pub fn upper_bounds(n: u32) -> UpperBounds {
    let open_chain = Pow::pow(&BigUint::from(9u32), n);
    let per_graph = Pow::pow(&BigUint::from(18u32), n);
    let double_factorial: BigUint = (1..=4 * n).step_by(2).map(BigUint::from).product();
    let total = &per_graph * double_factorial;
    UpperBounds { open_chain, per_graph, total }
}
