use spin_core::{pauli_dot, pauli_site, Axis, DenseOperator, SpinRegister};

/// Register order of the middle sites.
pub const MIDDLE_SITES: [&str; 4] = ["2", "3", "1'", "4'"];
pub const CONTROL_COUNT: usize = 5;

pub fn middle_register() -> SpinRegister {
    SpinRegister::new(&MIDDLE_SITES).expect("static labels")
}

/// The five control Hamiltonians:
/// `s2.s3`, `s1'.s4'`, `z2 z1' + z3 z4'`, `sum x`, `sum y`.
#[derive(Debug, Clone)]
pub struct ControlSet {
    pub ops: [DenseOperator; CONTROL_COUNT],
}

pub fn control_operators() -> ControlSet {
    let reg = middle_register();
    let site = |s: &str, a: Axis| pauli_site(&reg, s, a).expect("static labels");
    let zz = &(&site("2", Axis::Z) * &site("1'", Axis::Z)) + &(&site("3", Axis::Z) * &site("4'", Axis::Z));
    let field = |a: Axis| {
        MIDDLE_SITES.iter().fold(DenseOperator::zeros(16), |acc, s| &acc + &site(s, a)).with_hermitian_hint(true)
    };
    ControlSet {
        ops: [
            pauli_dot(&reg, "2", "3").expect("static labels"),
            pauli_dot(&reg, "1'", "4'").expect("static labels"),
            zz.with_hermitian_hint(true),
            field(Axis::X),
            field(Axis::Y),
        ],
    }
}

/// `1 - 2 P_T(2,3) P_T(1',4')` with `P_T = (3 + s.s)/4` the pair-triplet projector:
/// `-1` on the nine triplet-triplet states, `+1` elsewhere.
pub fn target_gate() -> DenseOperator {
    let reg = middle_register();
    let id = DenseOperator::identity(16);
    let triplet = |a: &str, b: &str| (&id.scale_re(3.0) + &pauli_dot(&reg, a, b).expect("static labels")).scale_re(0.25);
    (&id - &(&triplet("2", "3") * &triplet("1'", "4'")).scale_re(2.0)).with_hermitian_hint(true)
}
