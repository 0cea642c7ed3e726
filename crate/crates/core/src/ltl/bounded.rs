//! Rewriting of bounded windows into chains of `X`.

use super::Ltl;

/// `F[a,b] p` becomes `X^a (p | X (p | ... X p))` with `b - a + 1` copies of
/// `p`; `G[a,b]` likewise with `&`.
pub fn expand_bounded(f: &Ltl) -> Ltl {
    let e = |x: &Ltl| Box::new(expand_bounded(x));
    match f {
        Ltl::Const(_) | Ltl::Atom(_) => f.clone(),
        Ltl::Not(a) => Ltl::Not(e(a)),
        Ltl::And(a, b) => Ltl::And(e(a), e(b)),
        Ltl::Or(a, b) => Ltl::Or(e(a), e(b)),
        Ltl::Implies(a, b) => Ltl::Implies(e(a), e(b)),
        Ltl::Until(a, b) => Ltl::Until(e(a), e(b)),
        Ltl::Release(a, b) => Ltl::Release(e(a), e(b)),
        Ltl::Next(a) => Ltl::Next(e(a)),
        Ltl::Finally(a) => Ltl::Finally(e(a)),
        Ltl::Globally(a) => Ltl::Globally(e(a)),
        Ltl::Once(a) => Ltl::Once(e(a)),
        Ltl::Yesterday(a) => Ltl::Yesterday(e(a)),
        Ltl::Historically(a) => Ltl::Historically(e(a)),
        Ltl::BoundedF(lo, hi, a) | Ltl::BoundedG(lo, hi, a) => {
            let p = expand_bounded(a);
            let join = |x: Ltl, y: Ltl| {
                if matches!(f, Ltl::BoundedF(..)) {
                    Ltl::or(x, y)
                } else {
                    Ltl::and(x, y)
                }
            };
            let mut body = p.clone();
            for _ in *lo..*hi {
                body = join(p.clone(), Ltl::next(body));
            }
            for _ in 0..*lo {
                body = Ltl::next(body);
            }
            body
        }
    }
}
