//! Stinespring dilation of a random channel, its complementary channel, and
//! the freedom to rotate Kraus operators.

use chanlab::channels::{choi_of, dilate, rotate_kraus, KrausChannel};
use chanlab::linalg::{operator_norm, trace_norm};
use chanlab::random::{random_channel, random_density_with, random_unitary, seeded_rng};

fn main() -> chanlab::Result<()> {
    let mut rng = seeded_rng(8);
    let ch = random_channel(3, 2, 4, &mut rng);
    let dil = dilate(&ch);
    println!("V: {}x{} with environment dimension {}", dil.isometry().rows(), dil.isometry().cols(), dil.env_dim());
    println!("||V^dagger V - I|| = {:.3e}", dil.isometry_residual());
    println!("||P^2 - P|| for P = V V^dagger: {:.3e}", dil.idempotency_residual());

    let rho = random_density_with(3, 3, &mut rng)?;
    let via_dilation = dil.apply_op(rho.op())?;
    let via_kraus = ch.apply_op(rho.op())?;
    println!("||Tr_E[V rho V^dagger] - N(rho)||_1 = {:.3e}", trace_norm(&(&via_dilation - &via_kraus))?);
    let env = dil.complementary_op(rho.op())?;
    println!("complementary output trace: {:.12}", env.trace().re);

    let w = random_unitary(4, &mut rng);
    let rotated: KrausChannel = rotate_kraus(&ch, &w)?;
    println!(
        "Choi distance after rotating the Kraus list: {:.3e}",
        operator_norm(&(choi_of(&ch).op() - choi_of(&rotated).op()))
    );
    Ok(())
}
