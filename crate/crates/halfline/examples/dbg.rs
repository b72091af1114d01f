use halfline::specfun::*;
use halfline::c64;
fn main() {
    for (m, x) in [(0.0, 4.85), (1.0, 4.85), (2.0, 4.85), (0.0001, 4.85), (0.3, 5.97)] {
        let k = bessel_k(Order::real(m), x).unwrap();
        let i = bessel_i(Order::real(m), x).unwrap();
        println!("m={m} x={x}  K={:.17e}  (est {:.2e}, reg {})  I={:.17e}", k.value.re, k.est_abs_error, k.regularized, i.value.re);
    }
    let _ = c64(0.0,0.0);
}
