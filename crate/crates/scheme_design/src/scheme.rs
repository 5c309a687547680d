//! Complete detection scheme and its structured-text export.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Result, SchemeError};
use crate::network::{reference_amplitudes, transmittances, ReferenceNetwork};
use crate::roots::{solve_roots, EliminationRoots, Root};
use crate::target::TargetCoefficients;

/// Default transmittance of the last cascade beamsplitter.
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Synthesized elimination-measurement network for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionScheme {
    pub delta: f64,
    pub roots: EliminationRoots,
    /// Cascade transmittances `T_1..T_K`.
    pub t: Vec<f64>,
    /// Splitting fraction.
    pub q: f64,
    /// Reference amplitudes `γ̃_1..γ̃_K`.
    pub gtilde: Vec<Complex64>,
    pub ref_net: ReferenceNetwork,
}

impl DetectionScheme {
    pub fn k(&self) -> usize {
        self.t.len()
    }

    pub fn gamma(&self) -> Complex64 {
        self.roots.gamma
    }
}

/// Runs the full synthesis: roots, cascade, reference amplitudes, reference network.
pub fn design_scheme(target: &TargetCoefficients, gamma: Complex64, delta: f64) -> Result<DetectionScheme> {
    let roots = solve_roots(target, gamma)?;
    let (t, q) = transmittances(target.k(), delta)?;
    let gtilde = reference_amplitudes(&roots.expanded(), &t, q);
    let ref_net = ReferenceNetwork::solve(&gtilde)?;
    Ok(DetectionScheme {
        delta,
        roots,
        t,
        q,
        gtilde,
        ref_net,
    })
}

/// Float written with 17 significant digits (round-trip exact).
fn raw_f64(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

#[derive(Serialize, Deserialize)]
struct ComplexOut {
    re: Box<RawValue>,
    im: Box<RawValue>,
}

#[derive(Serialize, Deserialize)]
struct RootOut {
    re: Box<RawValue>,
    im: Box<RawValue>,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct RefNetOut {
    #[serde(rename = "Tp")]
    tp: Vec<Box<RawValue>>,
    phi: Vec<Box<RawValue>>,
    gtilde_master: ComplexOut,
}

#[derive(Serialize, Deserialize)]
struct SchemeOut {
    #[serde(rename = "K")]
    k: usize,
    delta: Box<RawValue>,
    gamma: ComplexOut,
    roots: Vec<RootOut>,
    #[serde(rename = "T")]
    t: Vec<Box<RawValue>>,
    q: Box<RawValue>,
    gtilde: Vec<ComplexOut>,
    ref_net: RefNetOut,
}

fn cplx(z: Complex64) -> ComplexOut {
    ComplexOut {
        re: raw_f64(z.re),
        im: raw_f64(z.im),
    }
}

fn parse_f64(v: &RawValue) -> std::result::Result<f64, serde_json::Error> {
    serde_json::from_str(v.get())
}

fn parse_c(z: &ComplexOut) -> std::result::Result<Complex64, serde_json::Error> {
    Ok(Complex64::new(parse_f64(&z.re)?, parse_f64(&z.im)?))
}

impl Serialize for DetectionScheme {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SchemeOut {
            k: self.k(),
            delta: raw_f64(self.delta),
            gamma: cplx(self.roots.gamma),
            roots: self
                .roots
                .roots
                .iter()
                .map(|r| RootOut {
                    re: raw_f64(r.value.re),
                    im: raw_f64(r.value.im),
                    mult: r.mult,
                })
                .collect(),
            t: self.t.iter().map(|&x| raw_f64(x)).collect(),
            q: raw_f64(self.q),
            gtilde: self.gtilde.iter().map(|&z| cplx(z)).collect(),
            ref_net: RefNetOut {
                tp: self.ref_net.tp.iter().map(|&x| raw_f64(x)).collect(),
                phi: self.ref_net.phi.iter().map(|&x| raw_f64(x)).collect(),
                gtilde_master: cplx(self.ref_net.gtilde_master),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DetectionScheme {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SchemeOut::deserialize(d)?;
        let err = |e: serde_json::Error| D::Error::custom(e.to_string());
        let floats = |v: &[Box<RawValue>]| {
            v.iter()
                .map(|x| parse_f64(x))
                .collect::<std::result::Result<Vec<_>, _>>()
        };
        let scheme = DetectionScheme {
            delta: parse_f64(&raw.delta).map_err(err)?,
            roots: EliminationRoots {
                roots: raw
                    .roots
                    .iter()
                    .map(|r| {
                        Ok(Root {
                            value: Complex64::new(parse_f64(&r.re)?, parse_f64(&r.im)?),
                            mult: r.mult,
                        })
                    })
                    .collect::<std::result::Result<_, serde_json::Error>>()
                    .map_err(err)?,
                gamma: parse_c(&raw.gamma).map_err(err)?,
            },
            t: floats(&raw.t).map_err(err)?,
            q: parse_f64(&raw.q).map_err(err)?,
            gtilde: raw
                .gtilde
                .iter()
                .map(parse_c)
                .collect::<std::result::Result<_, _>>()
                .map_err(err)?,
            ref_net: ReferenceNetwork {
                tp: floats(&raw.ref_net.tp).map_err(err)?,
                phi: floats(&raw.ref_net.phi).map_err(err)?,
                gtilde_master: parse_c(&raw.ref_net.gtilde_master).map_err(err)?,
            },
        };
        if scheme.k() != raw.k || scheme.gtilde.len() != raw.k || scheme.roots.k() != raw.k {
            return Err(D::Error::custom("field lengths do not match K"));
        }
        Ok(scheme)
    }
}

impl DetectionScheme {
    /// Pretty-printed JSON export.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| SchemeError::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| SchemeError::Format(e.to_string()))
    }
}
