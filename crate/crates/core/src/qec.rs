//! The 3-qubit bit-flip code and the 9-qubit Shor code as stabilizer codes.
//!
//! Qubits are numbered from 1 and qubit 1 is the leftmost (most significant)
//! bit of a computational-basis index.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Operator, Vector, C64, I, ONE, ZERO};
use crate::random::{random_pure, seeded_rng};

const NORM_TOL: f64 = 1e-9;
const EIGEN_TOL: f64 = 1e-6;

/// Pure state of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vector,
    n_qubits: usize,
}

impl StateVector {
    pub fn new(amplitudes: Vector, n_qubits: usize) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                got: amplitudes.len(),
            });
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// Basis state from a bit string such as `"010"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidArgument(format!("not a bit string: {bits}")))?;
        let mut v = Vector::zeros(1 << n);
        v[index] = ONE;
        Self::new(v, n)
    }

    /// Normalized superposition of basis strings with equal weight.
    pub fn uniform_superposition(strings: &[&str]) -> Result<Self> {
        let n = strings
            .first()
            .map(|s| s.len())
            .ok_or_else(|| Error::InvalidArgument("no basis strings".into()))?;
        let mut v = Vector::zeros(1 << n);
        for s in strings {
            let index = usize::from_str_radix(s, 2)
                .map_err(|_| Error::InvalidArgument(format!("not a bit string: {s}")))?;
            v[index] += ONE;
        }
        let norm = v.norm();
        Self::new(v / C64::new(norm, 0.0), n)
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amplitudes
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|<self|other>|^2`, blind to global phase.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            n_qubits: self.n_qubits + other.n_qubits,
        }
    }

    fn combine(a: C64, x: &StateVector, b: C64, y: &StateVector) -> Result<StateVector> {
        StateVector::new(&x.amplitudes * a + &y.amplitudes * b, x.n_qubits)
    }
}

fn i_power(k: u8) -> C64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// `i^phase * prod_j X_j^{x_j} Z_j^{z_j}` on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    phase: u8,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 63, "at most 63 qubits");
        Self {
            n,
            phase: 0,
            x: 0,
            z: 0,
        }
    }

    fn bit(&self, qubit: usize) -> u64 {
        1 << (self.n - qubit)
    }

    /// Single-qubit Pauli `kind` in {'X', 'Y', 'Z', 'I'} on `qubit` (1-based).
    pub fn single(n: usize, kind: char, qubit: usize) -> Result<Self> {
        if qubit == 0 || qubit > n {
            return Err(Error::InvalidPauli(format!("qubit {qubit} outside 1..={n}")));
        }
        let mut p = Self::identity(n);
        let b = p.bit(qubit);
        match kind {
            'I' => {}
            'X' => p.x = b,
            'Z' => p.z = b,
            'Y' => {
                p.x = b;
                p.z = b;
                p.phase = 1;
            }
            other => return Err(Error::InvalidPauli(format!("unknown Pauli {other}"))),
        }
        Ok(p)
    }

    /// Product of Paulis on the given qubits, all of the same kind.
    pub fn on(n: usize, kind: char, qubits: &[usize]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &q in qubits {
            p = p.mul(&Self::single(n, kind, q)?)?;
        }
        Ok(p)
    }

    /// Parse strings such as `"Z5"`, `"X1X2X3"`, `"-iY2"` or `"I"`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let mut rest = s.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase += 1;
            rest = r;
        }
        let mut p = Self::identity(n);
        p.phase = phase;
        if rest == "I" {
            return Ok(p);
        }
        if rest.is_empty() {
            return Err(Error::InvalidPauli(format!("no Pauli factors in {s:?}")));
        }
        let chars: Vec<char> = rest.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let kind = chars[k];
            k += 1;
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if start == k {
                return Err(Error::InvalidPauli(format!("missing qubit index in {s}")));
            }
            let qubit: usize = chars[start..k]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::InvalidPauli(s.to_string()))?;
            p = p.mul(&Self::single(n, kind, qubit)?)?;
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> C64 {
        i_power(self.phase)
    }

    pub fn x_bits(&self) -> Vec<bool> {
        (1..=self.n).map(|q| self.x & self.bit(q) != 0).collect()
    }

    pub fn z_bits(&self) -> Vec<bool> {
        (1..=self.n).map(|q| self.z & self.bit(q) != 0).collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&q| (self.x | self.z) & self.bit(q) != 0)
            .collect()
    }

    pub fn is_x_type(&self) -> bool {
        self.z == 0
    }

    pub fn is_z_type(&self) -> bool {
        self.x == 0
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        self.check_size(other.n)?;
        let swap = (self.z & other.x).count_ones() as u8;
        Ok(PauliString {
            n: self.n,
            phase: (self.phase + other.phase + 2 * (swap % 2)) % 4,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// Symplectic test: the strings commute iff their X/Z overlaps have even parity.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    fn y_count(&self) -> u8 {
        ((self.x & self.z).count_ones() % 4) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase + self.y_count()).is_multiple_of(2)
    }

    /// `P^2 = ±I`; returns the sign.
    pub fn square_sign(&self) -> i8 {
        if (self.phase + self.y_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Same bits with phase +1.
    pub fn without_phase(&self) -> PauliString {
        PauliString {
            phase: 0,
            ..self.clone()
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check_size(state.n_qubits)?;
        let (x, z) = (self.x as usize, self.z as usize);
        let ph = self.phase();
        let mut out = Vector::zeros(state.amplitudes.len());
        for (b, amp) in state.amplitudes.iter().enumerate() {
            let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[b ^ x] = amp * ph * sign;
        }
        Ok(StateVector {
            amplitudes: out,
            n_qubits: state.n_qubits,
        })
    }

    /// `<psi|P|psi>`
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        Ok(state.inner(&self.apply(state)?))
    }

    pub fn to_operator(&self) -> Operator {
        let d = 1usize << self.n;
        let (x, z) = (self.x as usize, self.z as usize);
        let ph = self.phase();
        let mut m = Mat::zeros(d, d);
        for b in 0..d {
            let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(b ^ x, b)] = ph * sign;
        }
        Operator::square(m, vec![2; self.n]).expect("power of two")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = (self.phase + 4 - self.y_count()) % 4;
        let prefix = ["", "i", "-", "-i"][shown as usize];
        write!(f, "{prefix}")?;
        if self.x | self.z == 0 {
            return write!(f, "I");
        }
        for q in 1..=self.n {
            let b = self.bit(q);
            match (self.x & b != 0, self.z & b != 0) {
                (true, true) => write!(f, "Y{q}")?,
                (true, false) => write!(f, "X{q}")?,
                (false, true) => write!(f, "Z{q}")?,
                _ => {}
            }
        }
        Ok(())
    }
}

/// Generator eigenvalues in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syndrome {
    pub bits: Vec<i8>,
}

impl Syndrome {
    pub fn trivial(len: usize) -> Self {
        Self { bits: vec![1; len] }
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.iter().all(|&b| b == 1)
    }

    fn product(&self, other: &Syndrome) -> Syndrome {
        Syndrome {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a * b).collect(),
        }
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bits
            .iter()
            .map(|&b| if b > 0 { "+1".into() } else { "-1".into() })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub codewords: [StateVector; 2],
    pub generators: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub decode_table: BTreeMap<Syndrome, PauliString>,
}

impl StabilizerCode {
    fn build(
        name: &str,
        codewords: [StateVector; 2],
        generators: Vec<PauliString>,
        logical_x: PauliString,
        logical_z: PauliString,
    ) -> Self {
        let n = codewords[0].n_qubits;
        let mut code = StabilizerCode {
            name: name.into(),
            n,
            codewords,
            generators,
            logical_x,
            logical_z,
            decode_table: BTreeMap::new(),
        };
        code.decode_table = code.single_error_table();
        code
    }

    /// Syndrome of a Pauli error read from commutation with each generator.
    pub fn syndrome_of(&self, error: &PauliString) -> Syndrome {
        Syndrome {
            bits: self
                .generators
                .iter()
                .map(|g| if g.commutes_with(error) { 1 } else { -1 })
                .collect(),
        }
    }

    /// Identity, then X_i, then Z_i (first qubit wins within a degenerate
    /// class), then Y_i composed from the X and Z corrections.
    fn single_error_table(&self) -> BTreeMap<Syndrome, PauliString> {
        let n = self.n;
        let mut table = BTreeMap::new();
        table.insert(Syndrome::trivial(self.generators.len()), PauliString::identity(n));
        for kind in ['X', 'Z'] {
            for q in 1..=n {
                let p = PauliString::single(n, kind, q).expect("qubit in range");
                table.entry(self.syndrome_of(&p)).or_insert(p);
            }
        }
        for q in 1..=n {
            let sx = self.syndrome_of(&PauliString::single(n, 'X', q).expect("in range"));
            let sz = self.syndrome_of(&PauliString::single(n, 'Z', q).expect("in range"));
            let combined = sx.product(&sz);
            if table.contains_key(&combined) {
                continue;
            }
            let fix = table[&sx].mul(&table[&sz]).expect("same size").without_phase();
            table.insert(combined, fix);
        }
        table
    }

    /// Check the code invariants; returns a list of failures.
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut failures = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            for (ci, c) in self.codewords.iter().enumerate() {
                let image = g.apply(c).expect("sizes match");
                let residual = (&image.amplitudes - &c.amplitudes).camax();
                if residual > 1e-12 {
                    failures.push(format!("generator {g} does not fix codeword {ci}"));
                }
            }
            for h in &self.generators[gi + 1..] {
                if !g.commutes_with(h) {
                    failures.push(format!("generators {g} and {h} anticommute"));
                }
            }
            for l in [&self.logical_x, &self.logical_z] {
                if !g.commutes_with(l) {
                    failures.push(format!("logical {l} anticommutes with {g}"));
                }
            }
        }
        if self.logical_x.commutes_with(&self.logical_z) {
            failures.push("logical X and Z commute".into());
        }
        match self.decode_table.get(&Syndrome::trivial(self.generators.len())) {
            Some(p) if p.weight() == 0 => {}
            _ => failures.push("trivial syndrome does not map to identity".into()),
        }
        failures
    }
}

pub fn three_qubit_code() -> StabilizerCode {
    let zero = StateVector::uniform_superposition(&["000", "111"]).expect("valid");
    let one = StateVector::combine(
        C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        &StateVector::basis("000").expect("valid"),
        C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        &StateVector::basis("111").expect("valid"),
    )
    .expect("normalized");
    let p = |s: &str| PauliString::parse(s, 3).expect("static Pauli");
    StabilizerCode::build(
        "three-qubit",
        [zero, one],
        vec![p("Z1Z2"), p("Z2Z3")],
        p("Z1"),
        p("X1X2X3"),
    )
}

pub fn shor_code() -> StabilizerCode {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let block = |sign: f64| {
        StateVector::combine(
            C64::new(s, 0.0),
            &StateVector::basis("000").expect("valid"),
            C64::new(sign * s, 0.0),
            &StateVector::basis("111").expect("valid"),
        )
        .expect("normalized")
    };
    let plus = block(1.0);
    let minus = block(-1.0);
    let zero = plus.tensor(&plus).tensor(&plus);
    let one = minus.tensor(&minus).tensor(&minus);
    let p = |s: &str| PauliString::parse(s, 9).expect("static Pauli");
    let generators = vec![
        p("Z1Z2"),
        p("Z2Z3"),
        p("Z4Z5"),
        p("Z5Z6"),
        p("Z7Z8"),
        p("Z8Z9"),
        p("X1X2X3X4X5X6"),
        p("X4X5X6X7X8X9"),
    ];
    StabilizerCode::build("shor", [zero, one], generators, p("Z1Z4Z7"), p("X1X2X3"))
}

/// `alpha |0_L> + beta |1_L>`
pub fn encode(code: &StabilizerCode, alpha: C64, beta: C64) -> Result<StateVector> {
    let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sq });
    }
    StateVector::combine(alpha, &code.codewords[0], beta, &code.codewords[1])
}

pub fn apply_pauli(state: &StateVector, p: &PauliString) -> Result<StateVector> {
    p.apply(state)
}

/// Random logical amplitudes from a seed.
pub fn random_logical(seed: u64) -> (C64, C64) {
    let psi = random_pure(&[2], &mut seeded_rng(seed));
    (psi.amplitudes()[0], psi.amplitudes()[1])
}

/// Read each generator's eigenvalue as `<psi|g|psi>`.
pub fn measure_syndrome_direct(code: &StabilizerCode, state: &StateVector) -> Result<Syndrome> {
    let mut bits = Vec::with_capacity(code.generators.len());
    for g in &code.generators {
        let e = g.expectation(state)?.re;
        if e.abs() < 1.0 - EIGEN_TOL {
            return Err(Error::NotEigenstate {
                generator: g.to_string(),
                expectation: e,
            });
        }
        bits.push(if e > 0.0 { 1 } else { -1 });
    }
    Ok(Syndrome { bits })
}

pub fn decode(code: &StabilizerCode, syndrome: &Syndrome) -> Result<PauliString> {
    if syndrome.bits.len() != code.generators.len() {
        return Err(Error::DimensionMismatch {
            expected: code.generators.len(),
            got: syndrome.bits.len(),
        });
    }
    code.decode_table
        .get(syndrome)
        .cloned()
        .ok_or_else(|| Error::Uncorrectable(syndrome.bits.clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub error: String,
    pub syndrome: Vec<i8>,
    pub correction: String,
    /// `|<psi_in|psi_out>|^2`
    pub fidelity: f64,
    pub logical_preserved: bool,
    /// Which logical operator the full cycle applied: "I", "X", "Z", "Y" or "other".
    pub effective_logical: String,
}

pub fn roundtrip(
    code: &StabilizerCode,
    logical: (C64, C64),
    error: &PauliString,
) -> Result<RoundtripReport> {
    let psi = encode(code, logical.0, logical.1)?;
    let corrupted = error.apply(&psi)?;
    let syndrome = measure_syndrome_direct(code, &corrupted)?;
    let correction = decode(code, &syndrome)?;
    let out = correction.apply(&corrupted)?;
    let fidelity = psi.overlap(&out);
    let y = code.logical_x.mul(&code.logical_z)?;
    let candidates = [
        ("I", PauliString::identity(code.n)),
        ("X", code.logical_x.clone()),
        ("Z", code.logical_z.clone()),
        ("Y", y),
    ];
    let mut effective = "other".to_string();
    for (label, l) in &candidates {
        if l.apply(&psi)?.overlap(&out) >= 1.0 - NORM_TOL {
            effective = label.to_string();
            break;
        }
    }
    Ok(RoundtripReport {
        error: error.to_string(),
        syndrome: syndrome.bits,
        correction: correction.to_string(),
        fidelity,
        logical_preserved: fidelity >= 1.0 - NORM_TOL,
        effective_logical: effective,
    })
}

/// Every single-qubit X, then Z, then Y error.
pub fn single_qubit_errors(n: usize) -> Vec<PauliString> {
    ['X', 'Z', 'Y']
        .iter()
        .flat_map(|&k| (1..=n).map(move |q| PauliString::single(n, k, q).expect("in range")))
        .collect()
}

pub fn sweep(code: &StabilizerCode, logical: (C64, C64)) -> Result<Vec<RoundtripReport>> {
    single_qubit_errors(code.n)
        .par_iter()
        .map(|e| roundtrip(code, logical, e))
        .collect()
}

/// Outcome of ancilla-based extraction of one generator.
#[derive(Clone, Debug, PartialEq)]
pub enum CircuitMeasurement {
    Deterministic {
        bit: u8,
        eigenvalue: i8,
        post_state: StateVector,
    },
    Probabilistic {
        p0: f64,
        p1: f64,
    },
}

fn hadamard_on(amps: &mut Vector, n_total: usize, qubit: usize) {
    let mask = 1usize << (n_total - qubit);
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for b in 0..amps.len() {
        if b & mask == 0 {
            let (a0, a1) = (amps[b], amps[b | mask]);
            amps[b] = (a0 + a1) * s;
            amps[b | mask] = (a0 - a1) * s;
        }
    }
}

fn cnot(amps: &mut Vector, n_total: usize, control: usize, target: usize) {
    let c = 1usize << (n_total - control);
    let t = 1usize << (n_total - target);
    for b in 0..amps.len() {
        if b & c != 0 && b & t == 0 {
            amps.swap_rows(b, b | t);
        }
    }
}

/// Run the extraction circuit and return the ancilla probabilities with the
/// joint state.
fn run_circuit(g: &PauliString, state: &StateVector) -> Result<(Vector, f64, f64)> {
    g.check_size(state.n_qubits)?;
    if !(g.is_x_type() || g.is_z_type()) || g.phase != 0 {
        return Err(Error::InvalidPauli(format!(
            "circuit extraction needs a pure X- or Z-type generator, got {g}"
        )));
    }
    let n = state.n_qubits;
    let total = n + 1;
    let ancilla = total;
    let mut amps = state.amplitudes.kronecker(&Vector::from_vec(vec![ONE, ZERO]));
    let support = g.support();
    let x_type = g.z == 0 && g.x != 0;
    if x_type {
        for &q in &support {
            hadamard_on(&mut amps, total, q);
        }
    }
    for &q in &support {
        cnot(&mut amps, total, q, ancilla);
    }
    if x_type {
        for &q in &support {
            hadamard_on(&mut amps, total, q);
        }
    }
    let p1: f64 = amps.iter().skip(1).step_by(2).map(|z| z.norm_sqr()).sum();
    let p0: f64 = amps.iter().step_by(2).map(|z| z.norm_sqr()).sum();
    Ok((amps, p0, p1))
}

fn collapse(amps: &Vector, bit: u8, prob: f64, n: usize) -> Result<StateVector> {
    let scale = C64::new(prob.sqrt().recip(), 0.0);
    let data = Vector::from_fn(amps.len() / 2, |b, _| amps[2 * b + bit as usize] * scale);
    StateVector::new(data, n)
}

/// Ancilla-based syndrome extraction for generator `index`.
pub fn circuit_syndrome(
    code: &StabilizerCode,
    state: &StateVector,
    index: usize,
) -> Result<CircuitMeasurement> {
    let g = code
        .generators
        .get(index)
        .ok_or_else(|| Error::InvalidArgument(format!("no generator {index}")))?;
    let (amps, p0, p1) = run_circuit(g, state)?;
    let bit = if p1 <= NORM_TOL {
        0
    } else if p0 <= NORM_TOL {
        1
    } else {
        return Ok(CircuitMeasurement::Probabilistic { p0, p1 });
    };
    let prob = if bit == 0 { p0 } else { p1 };
    Ok(CircuitMeasurement::Deterministic {
        bit,
        eigenvalue: if bit == 0 { 1 } else { -1 },
        post_state: collapse(&amps, bit, prob, state.n_qubits)?,
    })
}

/// Sampling variant: draws the ancilla outcome from the Born rule.
pub fn circuit_syndrome_sampled<R: Rng + ?Sized>(
    code: &StabilizerCode,
    state: &StateVector,
    index: usize,
    rng: &mut R,
) -> Result<(u8, StateVector)> {
    let g = code
        .generators
        .get(index)
        .ok_or_else(|| Error::InvalidArgument(format!("no generator {index}")))?;
    let (amps, p0, p1) = run_circuit(g, state)?;
    let bit = if rng.gen::<f64>() < p0 { 0 } else { 1 };
    let prob = if bit == 0 { p0 } else { p1 };
    Ok((bit, collapse(&amps, bit, prob, state.n_qubits)?))
}

/// Syndrome read out generator by generator through the ancilla circuit.
/// `None` when some generator does not act deterministically.
pub fn circuit_readout(code: &StabilizerCode, state: &StateVector) -> Result<Option<Syndrome>> {
    let mut bits = Vec::with_capacity(code.generators.len());
    for index in 0..code.generators.len() {
        match circuit_syndrome(code, state, index)? {
            CircuitMeasurement::Deterministic { eigenvalue, .. } => bits.push(eigenvalue),
            CircuitMeasurement::Probabilistic { .. } => return Ok(None),
        }
    }
    Ok(Some(Syndrome { bits }))
}
