//! Kraus list -> Choi operator -> canonical Kraus list, on random channels.

use chanlab::channels::{choi_of, kraus_from_choi, verify_cptp, KrausChannel};
use chanlab::linalg::{operator_norm, Tolerance};
use chanlab::random::{random_channel, seeded_rng};
use chanlab::suites::choi_roundtrip_fuzz;

fn main() -> chanlab::Result<()> {
    // Seven Kraus operators on 2 -> 3 is redundant: at most 6 are needed.
    let ch = random_channel(2, 3, 7, &mut seeded_rng(3));
    let choi = choi_of(&ch);
    let canonical = kraus_from_choi(&choi, &Tolerance::default())?;
    println!(
        "2 -> 3 channel: {} Kraus operators in, {} out, Choi distance {:.3e}",
        ch.kraus().len(),
        canonical.kraus().len(),
        operator_norm(&(choi.op() - choi_of(&canonical).op()))
    );
    println!("{:?}", verify_cptp(canonical.map())?);

    let dep = KrausChannel::depolarizing(0.25)?;
    let json = serde_json::to_string(&dep).expect("channels serialize");
    println!("depolarizing channel as JSON: {} bytes", json.len());

    let runs = choi_roundtrip_fuzz(100, 4, 9)?;
    let worst = runs.iter().map(|r| r.choi_distance).fold(0.0, f64::max);
    let max_ratio = runs
        .iter()
        .map(|r| r.kraus_out as f64 / (r.in_dim * r.out_dim) as f64)
        .fold(0.0, f64::max);
    println!("100 random channels up to 4 -> 4: worst Choi distance {worst:.3e}, max Kraus count / (dA dB) = {max_ratio}");
    Ok(())
}
