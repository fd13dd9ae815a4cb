//! The Gaussian-damped product of two Bessel functions, by quadrature and in
//! closed form, plus a Hankel round trip at an irrational order.

use abkit::specfun::{bessel_i, bessel_j, hankel_transform, weber_closed_form, weber_integral, Direction, RadialGrid};

fn main() -> abkit::Result<()> {
    println!("{:>5} {:>5} {:>5} {:>5} {:>18} {:>18} {:>9}", "nu", "r", "rb", "eps", "quadrature", "closed form", "rel");
    for nu in [0.0, 0.3, 0.5, 1.7] {
        for (r, rb, eps) in [(0.5, 0.7, 0.5), (1.0, 1.3, 1.0), (2.0, 2.5, 2.0)] {
            let q = weber_integral(nu, r, rb, eps, 1e-14)?;
            let c = weber_closed_form(nu, r, rb, eps);
            println!("{nu:5} {r:5} {rb:5} {eps:5} {q:18.15} {c:18.15} {:9.1e}", (q - c).abs() / c);
        }
    }
    println!("J_0.3(7) = {:.15}  I_1.7(3) = {:.15}", bessel_j(0.3, 7.0)?, bessel_i(1.7, 3.0)?);

    let nu = 1.0 / 3.0 + 2.0;
    let g = RadialGrid::new(12.0, 256)?;
    let f: Vec<f64> = g.nodes.iter().map(|r| r.powf(nu) * (-0.5 * r * r).exp()).collect();
    let h = hankel_transform(nu, &f, &g, Direction::Forward)?;
    let back = hankel_transform(nu, &h, &g, Direction::Inverse)?;
    let err = back.iter().zip(&f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("Hankel nu={nu:.4}: |f| = {:.12}, |Hf| = {:.12}, round trip max err {err:.1e}", g.norm(&f), g.norm(&h));
    Ok(())
}
