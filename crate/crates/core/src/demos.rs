//! Built-in demo objects shared by the CLI (`--seed-demo`) and the tests.

use crate::bratteli::{BratteliDiagram, IntertwiningCertificate, OrderedBratteliDiagram};
use crate::constructions::{
    amplify_diagram, assign_pinf_ordering, assign_pk_ordering, build_subexp_family,
    toeplitz_ordering, ConstructionError, GFunction, SubexpSpec,
};
use crate::directive::{fibonacci, DirectiveSequence};
use crate::matrix::Matrix;

pub const NAMES: [&str; 6] = [
    "p1-small",
    "p2-small",
    "pinf-small",
    "toeplitz-k1",
    "subexp-sqrt",
    "fibonacci",
];

/// Which property a demo is built to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Pk(usize),
    Pinf,
    Toeplitz(usize),
    Subexp,
    Control,
}

#[derive(Debug, Clone)]
pub struct Demo {
    pub name: &'static str,
    pub target: Target,
    /// The diagram before amplification, when there is one.
    pub seed: Option<BratteliDiagram>,
    pub certificate: Option<IntertwiningCertificate>,
    pub ordered: Option<OrderedBratteliDiagram>,
    pub sequence: DirectiveSequence,
    pub subexp: Option<SubexpSpec>,
}

/// Two vertices per level: `A_0 = (1, 1)ᵀ`, then `depth - 1` matrices with
/// every entry equal to `entry`.
pub fn two_vertex_seed(depth: usize, entry: u64) -> BratteliDiagram {
    let mut ms = vec![Matrix::filled(2, 1, 1)];
    ms.extend((1..depth).map(|_| Matrix::filled(2, 2, entry)));
    BratteliDiagram::from_matrices(ms).expect("well-formed seed")
}

/// Amplifies `seed` for `k` and orders it for (P_k).
pub fn pk_pipeline(seed: &BratteliDiagram, k: usize) -> Result<Demo, ConstructionError> {
    let (derived, cert) = amplify_diagram(seed, k)?;
    let ordered = assign_pk_ordering(&derived, k)?;
    Ok(Demo {
        name: "pk",
        target: Target::Pk(k),
        seed: Some(seed.clone()),
        certificate: Some(cert),
        sequence: ordered.read_morphisms()?,
        ordered: Some(ordered),
        subexp: None,
    })
}

pub fn p1_small() -> Demo {
    Demo {
        name: "p1-small",
        ..pk_pipeline(&two_vertex_seed(9, 50), 1).expect("p1 demo")
    }
}

pub fn p2_small() -> Demo {
    Demo {
        name: "p2-small",
        ..pk_pipeline(&two_vertex_seed(9, 50), 2).expect("p2 demo")
    }
}

/// Amplified with `k` at least the depth so level `n` has room for `k = n`.
pub fn pinf_small() -> Demo {
    let seed = two_vertex_seed(6, 60);
    let (derived, cert) = amplify_diagram(&seed, 6).expect("amplifiable seed");
    let ordered = assign_pinf_ordering(&derived).expect("pinf ordering");
    Demo {
        name: "pinf-small",
        target: Target::Pinf,
        seed: Some(seed),
        certificate: Some(cert),
        sequence: ordered.read_morphisms().expect("readable"),
        ordered: Some(ordered),
        subexp: None,
    }
}

/// Three vertices per level, every entry 5, `k = 1`.
pub fn toeplitz_k1() -> Demo {
    let mut ms = vec![Matrix::filled(3, 1, 1)];
    ms.extend((1..6).map(|_| Matrix::filled(3, 3, 5)));
    let d = BratteliDiagram::from_matrices(ms).expect("well-formed");
    let ordered = toeplitz_ordering(&d, 1).expect("toeplitz ordering");
    Demo {
        name: "toeplitz-k1",
        target: Target::Toeplitz(1),
        seed: Some(d),
        certificate: None,
        sequence: ordered.read_morphisms().expect("readable"),
        ordered: Some(ordered),
        subexp: None,
    }
}

pub fn subexp_sqrt() -> Demo {
    let (sequence, spec) =
        build_subexp_family(&GFunction::Pow2Sqrt, 1, 64, 2).expect("subexp family");
    Demo {
        name: "subexp-sqrt",
        target: Target::Subexp,
        seed: None,
        certificate: None,
        ordered: None,
        sequence,
        subexp: Some(spec),
    }
}

pub fn fibonacci_demo() -> Demo {
    Demo {
        name: "fibonacci",
        target: Target::Control,
        seed: None,
        certificate: None,
        ordered: None,
        sequence: fibonacci(),
        subexp: None,
    }
}

pub fn by_name(name: &str) -> Option<Demo> {
    Some(match name {
        "p1-small" => p1_small(),
        "p2-small" => p2_small(),
        "pinf-small" => pinf_small(),
        "toeplitz-k1" => toeplitz_k1(),
        "subexp-sqrt" => subexp_sqrt(),
        "fibonacci" => fibonacci_demo(),
        _ => return None,
    })
}
