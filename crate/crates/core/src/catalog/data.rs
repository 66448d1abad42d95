use super::{AlgebraicGf, BoundaryForms, CatalogEntry, ModelClass, StoredForm};

const fn form(rate: &'static str, alpha: (i64, i64), constants: &'static [&'static str]) -> StoredForm {
    StoredForm { rate, alpha, constants }
}

const A_OVER: &[&str] = &["(156+41*sqrt(6))*sqrt(23-3*sqrt(6))/(285*pi)"];
const B_OVER: &[&str] = &["2*(583+138*sqrt(6))*sqrt(23-3*sqrt(6))/(1805*pi)"];
const C_OVER: &[&str] = &["6*(4571+1856*sqrt(6))*sqrt(23-3*sqrt(6))/(1805*pi)"];

macro_rules! entry {
    ($name:expr, $alias:expr, $steps:expr, $class:ident, $t1:expr, $t2:expr, $gf:expr) => {
        CatalogEntry {
            name: $name,
            alias: $alias,
            steps: $steps,
            class: ModelClass::$class,
            anywhere: $t1,
            boundary: $t2,
            gf_closed_form: $gf,
        }
    };
}

fn boundary(x_axis: StoredForm, y_axis: StoredForm, origin: StoredForm) -> Option<BoundaryForms> {
    Some(BoundaryForms { x_axis, y_axis, origin })
}

pub(super) fn entries() -> Vec<CatalogEntry> {
    vec![
        entry!("N,S,E,W", Some("simple"), &["N", "S", "E", "W"], HighlySymmetric,
            form("4", (-1, 1), &["4/pi"]),
            boundary(form("4", (-2, 1), &["8/pi"]), form("4", (-2, 1), &["8/pi"]), form("4", (-3, 1), &["32/pi", "0"])),
            None),
        entry!("NE,SE,NW,SW", Some("diagonal"), &["NE", "SE", "NW", "SW"], HighlySymmetric,
            form("4", (-1, 1), &["2/pi"]),
            boundary(form("4", (-2, 1), &["4/pi", "0"]), form("4", (-2, 1), &["4/pi", "0"]), form("4", (-3, 1), &["8/pi", "0"])),
            None),
        entry!("N,S,NE,SE,NW,SW", None, &["N", "S", "NE", "SE", "NW", "SW"], HighlySymmetric,
            form("6", (-1, 1), &["sqrt(6)/pi"]),
            boundary(form("6", (-2, 1), &["3*sqrt(6)/(2*pi)"]), form("6", (-2, 1), &["2*sqrt(6)/pi", "0"]), form("6", (-3, 1), &["3*sqrt(6)/pi", "0"])),
            None),
        entry!("N,S,E,W,NW,SW,SE,NE", Some("king"), &["N", "S", "E", "W", "NW", "SW", "SE", "NE"], HighlySymmetric,
            form("8", (-1, 1), &["8/(3*pi)"]),
            boundary(form("8", (-2, 1), &["32/(9*pi)"]), form("8", (-2, 1), &["32/(9*pi)"]), form("8", (-3, 1), &["128/(27*pi)"])),
            None),
        entry!("NE,NW,S", None, &["NE", "NW", "S"], PositiveDrift,
            form("3", (-1, 2), &["sqrt(3)/(2*sqrt(pi))"]),
            boundary(
                form("3", (-3, 2), &["3*sqrt(3)/(4*sqrt(pi))"]),
                form("2*sqrt(2)", (-2, 1), &["4*sqrt(2)/pi", "0"]),
                form("2*sqrt(2)", (-3, 1), &["16*sqrt(2)/pi", "0", "0", "0"])),
            None),
        entry!("N,NW,NE,S", None, &["N", "NW", "NE", "S"], PositiveDrift,
            form("4", (-1, 2), &["4/(3*sqrt(pi))"]),
            boundary(
                form("4", (-3, 2), &["8/(3*sqrt(pi))"]),
                form("2*sqrt(3)", (-2, 1), &["4*sqrt(3)/pi", "0"]),
                form("2*sqrt(3)", (-3, 1), &["12*sqrt(3)/pi", "0"])),
            None),
        entry!("N,NE,NW,SE,SW", None, &["N", "NE", "NW", "SE", "SW"], PositiveDrift,
            form("5", (-1, 2), &["sqrt(5)/(3*sqrt(2*pi))"]),
            boundary(
                form("5", (-3, 2), &["5*sqrt(10)/(24*sqrt(pi))"]),
                form("2*sqrt(6)", (-2, 1), &["4*sqrt(30)/(5*pi)", "0"]),
                form("2*sqrt(6)", (-3, 1), &["24*sqrt(30)/(25*pi)", "0"])),
            None),
        entry!("NE,NW,E,W,S", None, &["NE", "NW", "E", "W", "S"], PositiveDrift,
            form("5", (-1, 2), &["sqrt(5)/(2*sqrt(2*pi))"]),
            boundary(
                form("5", (-3, 2), &["5*sqrt(10)/(16*sqrt(pi))"]),
                form("2+2*sqrt(2)", (-2, 1), &["sqrt(2)*(1+sqrt(2))^(3/2)/pi"]),
                form("2+2*sqrt(2)", (-3, 1), &["2*(1+sqrt(2))^(3/2)/pi"])),
            None),
        entry!("N,NW,NE,E,W,S", None, &["N", "NW", "NE", "E", "W", "S"], PositiveDrift,
            form("6", (-1, 2), &["2*sqrt(3)/(3*sqrt(pi))"]),
            boundary(
                form("6", (-3, 2), &["sqrt(3)/sqrt(pi)"]),
                form("2+2*sqrt(3)", (-2, 1), &["2*sqrt(3)*(1+sqrt(3))^(3/2)/(3*pi)"]),
                form("2+2*sqrt(3)", (-3, 1), &["2*(1+sqrt(3))^(3/2)/pi"])),
            None),
        entry!("N,E,W,NE,NW,SE,SW", None, &["N", "E", "W", "NE", "NW", "SE", "SW"], PositiveDrift,
            form("7", (-1, 2), &["sqrt(7)/(3*sqrt(3*pi))"]),
            boundary(
                form("7", (-3, 2), &["7*sqrt(21)/(54*sqrt(pi))"]),
                form("2+2*sqrt(6)", (-2, 1), A_OVER),
                form("2+2*sqrt(6)", (-3, 1), B_OVER)),
            None),
        entry!("N,SE,SW", None, &["N", "SE", "SW"], NegativeDrift,
            form("2*sqrt(2)", (-2, 1), &["24*sqrt(2)/pi", "32/pi"]),
            boundary(
                form("2*sqrt(2)", (-3, 1), &["448*sqrt(2)/(9*pi)", "640/(9*pi)", "416*sqrt(2)/(9*pi)", "512/(9*pi)"]),
                form("2*sqrt(2)", (-2, 1), &["4*sqrt(2)/pi", "0"]),
                form("2*sqrt(2)", (-3, 1), &["16*sqrt(2)/pi", "0", "0", "0"])),
            None),
        entry!("N,S,SE,SW", None, &["N", "S", "SE", "SW"], NegativeDrift,
            form("2*sqrt(3)", (-2, 1), &["12*sqrt(3)/pi", "18/pi"]),
            boundary(
                form("2*sqrt(3)", (-3, 1), &["36*sqrt(3)/pi", "54/pi"]),
                form("2*sqrt(3)", (-2, 1), &["4*sqrt(3)/pi", "0"]),
                form("2*sqrt(3)", (-3, 1), &["12*sqrt(3)/pi", "0"])),
            None),
        entry!("NE,NW,SE,SW,S", None, &["NE", "NW", "SE", "SW", "S"], NegativeDrift,
            form("2*sqrt(6)", (-2, 1), &["12*sqrt(30)/pi", "144/(sqrt(5)*pi)"]),
            boundary(
                form("2*sqrt(6)", (-3, 1), &["72*sqrt(30)/(5*pi)", "864*sqrt(5)/(25*pi)"]),
                form("2*sqrt(6)", (-2, 1), &["4*sqrt(30)/(5*pi)", "0"]),
                form("2*sqrt(6)", (-3, 1), &["24*sqrt(30)/(25*pi)", "0"])),
            None),
        entry!("N,E,W,SE,SW", None, &["N", "E", "W", "SE", "SW"], NegativeDrift,
            form("2+2*sqrt(2)", (-2, 1), &["sqrt(8)*(1+sqrt(2))^(7/2)/pi"]),
            boundary(
                form("2+2*sqrt(2)", (-3, 1), &["4*(1+sqrt(2))^(7/2)/pi"]),
                form("2+2*sqrt(2)", (-2, 1), &["sqrt(2)*(1+sqrt(2))^(3/2)/pi"]),
                form("2+2*sqrt(2)", (-3, 1), &["2*(1+sqrt(2))^(3/2)/pi"])),
            None),
        entry!("N,E,W,S,SW,SE", None, &["N", "E", "W", "S", "SW", "SE"], NegativeDrift,
            form("2+2*sqrt(3)", (-2, 1), &["sqrt(3)*(1+sqrt(3))^(7/2)/(2*pi)"]),
            boundary(
                form("2+2*sqrt(3)", (-3, 1), &["3*(1+sqrt(3))^(7/2)/(2*pi)"]),
                form("2+2*sqrt(3)", (-2, 1), &["2*sqrt(3)*(1+sqrt(3))^(3/2)/(3*pi)"]),
                form("2+2*sqrt(3)", (-3, 1), &["2*(1+sqrt(3))^(3/2)/pi"])),
            None),
        entry!("NE,NW,E,W,SE,SW,S", None, &["NE", "NW", "E", "W", "SE", "SW", "S"], NegativeDrift,
            form("2+2*sqrt(6)", (-2, 1), &["sqrt(570-114*sqrt(6))*(24*sqrt(6)+59)/(19*pi)"]),
            boundary(
                form("2+2*sqrt(6)", (-3, 1), C_OVER),
                form("2+2*sqrt(6)", (-2, 1), A_OVER),
                form("2+2*sqrt(6)", (-3, 1), B_OVER)),
            None),
        entry!("NE,W,S", Some("kreweras"), &["NE", "W", "S"], AlgebraicExceptional,
            form("3", (-3, 4), &["2*sqrt(2)/gamma(1/4)"]), None, None),
        entry!("N,E,SW", Some("reverse-kreweras"), &["N", "E", "SW"], AlgebraicExceptional,
            form("3", (-3, 4), &["3*sqrt(3)/(sqrt(2)*gamma(1/4))"]), None, None),
        entry!("N,NE,E,S,SW,W", Some("double-kreweras"), &["N", "NE", "E", "S", "SW", "W"], AlgebraicExceptional,
            form("6", (-3, 4), &["sqrt(6*sqrt(3))/gamma(1/4)"]), None, None),
        entry!("NE,E,SW,W", Some("gessel"), &["NE", "E", "SW", "W"], AlgebraicExceptional,
            form("4", (-2, 3), &["4*sqrt(3)/(3*gamma(1/3))"]), None, None),
        entry!("N,W,SE", None, &["N", "W", "SE"], NoSymmetryDFinite,
            form("3", (-3, 2), &["3*sqrt(3)/(2*sqrt(pi))"]),
            boundary(
                form("3", (-5, 2), &["27*sqrt(3)/(8*sqrt(pi))"]),
                form("3", (-5, 2), &["27*sqrt(3)/(8*sqrt(pi))"]),
                form("3", (-4, 1), &["81*sqrt(3)/pi", "0", "0"])),
            Some(AlgebraicGf { expression: "(1-t-sqrt(1-2t-3t^2))/(2t^2)", linear: 1, quadratic: 3, denominator: 2 })),
        entry!("NW,SE,N,S,E,W", None, &["NW", "SE", "N", "S", "E", "W"], NoSymmetryDFinite,
            form("6", (-3, 2), &["3*sqrt(3)/(2*sqrt(pi))"]),
            boundary(
                form("6", (-5, 2), &["27*sqrt(3)/(8*sqrt(pi))"]),
                form("6", (-5, 2), &["27*sqrt(3)/(8*sqrt(pi))"]),
                form("6", (-4, 1), &["27*sqrt(3)/pi"])),
            Some(AlgebraicGf { expression: "(1-2t-sqrt(1-4t-12t^2))/(8t^2)", linear: 2, quadratic: 12, denominator: 8 })),
        entry!("E,SE,W,NW", None, &["E", "SE", "W", "NW"], NoSymmetryDFinite,
            form("4", (-2, 1), &["8/pi"]),
            boundary(
                form("4", (-3, 1), &["32/pi", "0"]),
                form("4", (-3, 1), &["32/pi"]),
                form("4", (-5, 1), &["768/pi", "0"])),
            None),
    ]
}
