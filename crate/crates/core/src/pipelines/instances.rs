//! The four published finite-check instances.
//!
//! In each, `r` is the congruent form of `f_2 / f_1^3` modulo `u`
//! (via `f_1^{p^a} = f_p^{p^(a-1)} mod p^a`), and `r'` is the auxiliary
//! exponent vector at level `N`.

use crate::finite_check::RsInstance;

/// `b(125n + 99) = 0 (mod 25)`: `f_1^22 f_2 / f_5^5`, `r' = (13, 0, 0, 0)`.
pub fn mod25() -> RsInstance {
    RsInstance::new(125, 10, 10, 99, &[(1, 22), (2, 1), (5, -5), (10, 0)], &[(1, 13)], 25)
        .expect("valid instance")
}

/// `b(49n + s) = 0 (mod 7)` for `s` in `{19, 33, 40}`: `f_1^4 f_2 / f_7`.
pub fn mod7_t33() -> RsInstance {
    mod7(33)
}

/// `b(49n + 47) = 0 (mod 7)`.
pub fn mod7_t47() -> RsInstance {
    mod7(47)
}

fn mod7(t: u64) -> RsInstance {
    RsInstance::new(49, 14, 14, t, &[(1, 4), (2, 1), (7, -1), (14, 0)], &[(1, 3)], 7)
        .expect("valid instance")
}

/// `b(343n + t) = 0 (mod 49)` for `t` in `{96, 292, 341}`: `f_1^46 f_2 / f_7^7`.
pub fn mod49() -> RsInstance {
    RsInstance::new(343, 14, 14, 96, &[(1, 46), (2, 1), (7, -7), (14, 0)], &[(1, 18)], 49)
        .expect("valid instance")
}

/// All four, in publication order.
pub fn all() -> Vec<RsInstance> {
    vec![mod25(), mod7_t33(), mod7_t47(), mod49()]
}
