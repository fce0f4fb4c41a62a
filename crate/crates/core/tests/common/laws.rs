//! Algebraic laws as seeded checks, shared by the property suite and the
//! acceptance harness. Each law draws its own operands from the generator.

use energy_core::value::rat;
use energy_core::{omega, EnergyFunction, ExtValue, Rational, ThresholdPredicate};
use rand::Rng;

use super::{function, grid, small_rational, Shape, TestRng};

pub type Law = fn(&mut TestRng) -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

macro_rules! ensure_eq {
    ($l:expr, $r:expr, $what:expr) => {{
        let (l, r) = (&$l, &$r);
        ensure!(l == r, "{}: {} != {}", $what, l, r);
    }};
}

fn f(r: &mut TestRng) -> EnergyFunction {
    function(r, Shape::ALGEBRA)
}

fn pred(r: &mut TestRng) -> ThresholdPredicate {
    if r.gen_bool(0.1) {
        ThresholdPredicate::Never
    } else {
        ThresholdPredicate::from_value(small_rational(r, 20, 4), r.gen_bool(0.5))
    }
}

/// `sup_n g(fⁿ(h(x)))`, evaluated pointwise. Iteration stops once `f` stops
/// gaining, or once it gains strictly beyond every breakpoint, after which the
/// gain never shrinks and the supremum is `g(∞)`.
pub fn sup_iterates(g: &EnergyFunction, f: &EnergyFunction, h: &EnergyFunction, x: &Rational) -> ExtValue {
    let horizon = [g, f, h].iter().flat_map(|k| k.breakpoints().last().cloned()).max().unwrap_or_else(|| rat(0));
    let mut y = h.eval(&ExtValue::Fin(x.clone()));
    let mut best = g.eval(&y);
    loop {
        let next = f.eval(&y);
        if next <= y {
            return best;
        }
        if next == ExtValue::Inf || y > ExtValue::Fin(horizon.clone()) {
            return best.max(g.eval(&ExtValue::Inf));
        }
        y = next;
        best = best.max(g.eval(&y));
    }
}

pub fn join_semilattice(r: &mut TestRng) -> Result<(), String> {
    let (f, g, h) = (f(r), f(r), f(r));
    ensure_eq!(f.join(&g).join(&h), f.join(&g.join(&h)), "associativity");
    ensure_eq!(f.join(&g), g.join(&f), "commutativity");
    ensure_eq!(f.join(&f), f, "idempotence");
    ensure_eq!(f.join(&EnergyFunction::bottom()), f, "bottom is neutral");
    Ok(())
}

pub fn composition_monoid(r: &mut TestRng) -> Result<(), String> {
    let (f, g, h) = (f(r), f(r), f(r));
    ensure_eq!(h.compose(&g).compose(&f), h.compose(&g.compose(&f)), "associativity");
    ensure_eq!(f.compose(&EnergyFunction::identity()), f, "right identity");
    ensure_eq!(EnergyFunction::identity().compose(&f), f, "left identity");
    ensure!(f.compose(&EnergyFunction::bottom()).is_bottom(), "bottom annihilates on the right");
    ensure!(EnergyFunction::bottom().compose(&f).is_bottom(), "bottom annihilates on the left");
    Ok(())
}

pub fn distributivity(r: &mut TestRng) -> Result<(), String> {
    let (f, g, h) = (f(r), f(r), f(r));
    ensure_eq!(f.join(&g).compose(&h), f.compose(&h).join(&g.compose(&h)), "right distributivity");
    ensure_eq!(h.compose(&f.join(&g)), h.compose(&f).join(&h.compose(&g)), "left distributivity");
    Ok(())
}

pub fn conway_sum_star(r: &mut TestRng) -> Result<(), String> {
    let (f, g) = (f(r), f(r));
    ensure_eq!(g.join(&f).star(), g.star().compose(&f).star().compose(&g.star()), "sum-star");
    Ok(())
}

pub fn conway_product_star(r: &mut TestRng) -> Result<(), String> {
    let (f, g) = (f(r), f(r));
    let rhs = g.compose(&f.compose(&g).star()).compose(&f).join(&EnergyFunction::identity());
    ensure_eq!(g.compose(&f).star(), rhs, "product-star");
    Ok(())
}

pub fn star_unfolding(r: &mut TestRng) -> Result<(), String> {
    let f = f(r);
    let s = f.star();
    ensure_eq!(s, EnergyFunction::identity().join(&f.compose(&s)), "f* = id ∨ f f*");
    ensure_eq!(s.star(), s, "f** = f*");
    ensure!(EnergyFunction::identity().leq(&s) && f.leq(&s), "id ≤ f* and f ≤ f* for {f}");
    Ok(())
}

pub fn star_supremum(r: &mut TestRng) -> Result<(), String> {
    let (f, g, h) = (f(r), f(r), f(r));
    let lhs = g.compose(&f.star()).compose(&h);
    for x in grid(&[&f, &g, &h]) {
        ensure_eq!(lhs.eval(&ExtValue::Fin(x.clone())), sup_iterates(&g, &f, &h, &x), format!("g f* h at {x}"));
    }
    Ok(())
}

pub fn pointwise(r: &mut TestRng) -> Result<(), String> {
    let (f, g) = (f(r), f(r));
    let (j, c) = (f.join(&g), g.compose(&f));
    for x in grid(&[&f, &g]) {
        let x = ExtValue::Fin(x);
        ensure_eq!(j.eval(&x), f.eval(&x).max(g.eval(&x)), format!("join at {x}"));
        ensure_eq!(c.eval(&x), g.eval(&f.eval(&x)), format!("composition at {x}"));
    }
    ensure!(j.check().is_ok() && c.check().is_ok() && f.star().check().is_ok(), "non-canonical result");
    Ok(())
}

pub fn energy_condition(r: &mut TestRng) -> Result<(), String> {
    let f = f(r);
    let xs = grid(&[&f]);
    for _ in 0..20 {
        let (i, k) = (r.gen_range(0..xs.len()), r.gen_range(0..xs.len()));
        let (x1, x2) = if xs[i] <= xs[k] { (&xs[i], &xs[k]) } else { (&xs[k], &xs[i]) };
        let y1 = f.eval(&ExtValue::Fin(x1.clone()));
        if y1.is_bot() {
            continue;
        }
        ensure!(f.eval(&ExtValue::Fin(x2.clone())) >= y1.add(&(x2 - x1)), "{f} between {x1} and {x2}");
    }
    Ok(())
}

pub fn semimodule(r: &mut TestRng) -> Result<(), String> {
    let (u, v, f, g) = (pred(r), pred(r), f(r), f(r));
    ensure_eq!(u.act(&g.compose(&f)), u.act(&g).act(&f), "u(gf) = (ug)f");
    ensure_eq!(u.act(&EnergyFunction::identity()), u, "u id = u");
    ensure_eq!(u.join(&v).act(&f), u.act(&f).join(&v.act(&f)), "(u ∨ v)f");
    ensure_eq!(u.act(&f.join(&g)), u.act(&f).join(&u.act(&g)), "u(f ∨ g)");
    ensure_eq!(u.act(&EnergyFunction::bottom()), ThresholdPredicate::Never, "u bot");
    Ok(())
}

pub fn action_of_star(r: &mut TestRng) -> Result<(), String> {
    let (u, f) = (pred(r), f(r));
    let lhs = u.act(&f.star());
    let id = EnergyFunction::identity();
    for x in grid(&[&f]) {
        let sup = sup_iterates(&id, &f, &id, &x);
        ensure_eq!(lhs.eval(&ExtValue::Fin(x.clone())), u.eval(&sup), format!("u f* at {x}"));
    }
    Ok(())
}

pub fn omega_identities(r: &mut TestRng) -> Result<(), String> {
    let (f, g) = (f(r), f(r));
    ensure_eq!(omega(&g.compose(&f)), omega(&f.compose(&g)).act(&f), "(fg)^ω = (gf)^ω f");
    let gfs = g.compose(&f.star());
    ensure_eq!(omega(&f.join(&g)), omega(&f).act(&gfs.star()).join(&omega(&gfs)), "(f ∨ g)^ω");
    ensure_eq!(omega(&f), omega(&f).act(&f), "f^ω = f^ω f");
    Ok(())
}

pub fn omega_pointwise(r: &mut TestRng) -> Result<(), String> {
    let f = f(r);
    let w = omega(&f);
    for x in grid(&[&f]) {
        let fx = f.eval(&ExtValue::Fin(x.clone()));
        ensure_eq!(w.eval(&ExtValue::Fin(x.clone())), fx >= ExtValue::Fin(x.clone()), format!("f^ω at {x}"));
    }
    Ok(())
}

pub fn losing_iteration_dies(r: &mut TestRng) -> Result<(), String> {
    let f = f(r);
    let x = small_rational(r, 30, 4);
    if let ExtValue::Fin(y) = f.eval(&ExtValue::Fin(x.clone())) {
        if y < x {
            // the loss per step never shrinks as energy decreases
            let bound = (&x / (&x - &y)).ceil().to_integer();
            let bound = u64::try_from(bound).unwrap() + 1;
            let mut e = ExtValue::Fin(x.clone());
            let mut steps = 0u64;
            while !e.is_bot() {
                e = f.eval(&e);
                steps += 1;
                ensure!(steps <= bound, "{f} from {x}: still alive after {steps} steps");
            }
        }
    }
    Ok(())
}

pub const ALL: [(&str, Law); 15] = [
    ("join semilattice", join_semilattice),
    ("composition monoid with zero", composition_monoid),
    ("distributivity", distributivity),
    ("Conway sum-star", conway_sum_star),
    ("Conway product-star", conway_product_star),
    ("star unfolding", star_unfolding),
    ("star is supremum of powers", star_supremum),
    ("pointwise join and composition", pointwise),
    ("energy condition", energy_condition),
    ("semimodule laws", semimodule),
    ("action of star", action_of_star),
    ("omega identities", omega_identities),
    ("omega pointwise", omega_pointwise),
    ("losing iteration dies", losing_iteration_dies),
    ("omega of fixed point", omega_fixed),
];

pub fn omega_fixed(r: &mut TestRng) -> Result<(), String> {
    let (f, g) = (f(r), f(r));
    let w = omega(&f.compose(&g));
    ensure_eq!(w.act(&f.compose(&g)), w, "omega is fixed by its function");
    Ok(())
}
