//! Subcommand bodies, returning their output as strings so they can be
//! tested without spawning the binary.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use coble_core::characteristics::{enumerate_aronhold_sets, enumerate_characteristics, Characteristic, ParityFilter};
use coble_core::gopel::enumerate_gopel;
use coble_core::quartic::{coble_eval, coble_formula_records, coble_gradient, kummer2_eval, CobleFormulaRecord};
use coble_core::theta::{PeriodMatrixData, PhasePointData};
use coble_core::{PeriodMatrix64, PhasePoint64, ThetaEngine64};
use num_complex::Complex;
use serde::Serialize;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EnumerateKind {
    Even,
    Odd,
    Gopel,
    Fano,
    Pascal,
    Aronhold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalKind {
    Theta,
    Theta2,
    Coble,
    CobleGrad,
    Kummer2,
}

fn render<T: Serialize>(value: &T, text: impl FnOnce() -> String, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)?,
        Format::Text => text(),
    })
}

pub fn enumerate(kind: EnumerateKind, g: usize, format: Format) -> anyhow::Result<String> {
    match kind {
        EnumerateKind::Even | EnumerateKind::Odd => {
            let filter = if kind == EnumerateKind::Even { ParityFilter::Even } else { ParityFilter::Odd };
            let items = enumerate_characteristics(g, filter)?.to_strings();
            render(&items, || items.join("\n"), format)
        }
        EnumerateKind::Gopel | EnumerateKind::Fano | EnumerateKind::Pascal => {
            let systems: Vec<_> = enumerate_gopel(g)?
                .into_iter()
                .filter(|s| match kind {
                    EnumerateKind::Fano => s.is_fano(),
                    EnumerateKind::Pascal => s.is_pascal(),
                    _ => true,
                })
                .collect();
            if g != 3 && kind != EnumerateKind::Gopel {
                bail!("Fano and Pascal systems are defined for g = 3");
            }
            render(&systems, || systems.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("\n"), format)
        }
        EnumerateKind::Aronhold => {
            let sets: Vec<Vec<String>> = enumerate_aronhold_sets(g)?.iter().map(|s| s.to_strings()).collect();
            render(&sets, || sets.iter().map(|s| s.join(" ")).collect::<Vec<_>>().join("\n"), format)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_tau(path: &Path) -> anyhow::Result<PeriodMatrix64> {
    Ok(PeriodMatrix64::from_data(&read_json::<PeriodMatrixData>(path)?)?)
}

pub fn load_z(path: &Path) -> anyhow::Result<PhasePoint64> {
    Ok(PhasePoint64::from_data(&read_json::<PhasePointData>(path)?)?)
}

fn pair(c: Complex<f64>) -> [f64; 2] {
    [c.re, c.im]
}

pub fn eval(
    kind: EvalKind,
    tau: &PeriodMatrix64,
    z: Option<&PhasePoint64>,
    characteristic: Option<&str>,
    format: Format,
) -> anyhow::Result<String> {
    let engine = ThetaEngine64::default();
    let g = tau.genus();
    let zero = PhasePoint64::zero(g)?;
    let z = z.unwrap_or(&zero);
    if z.genus() != g {
        bail!("z has genus {} but τ has genus {g}", z.genus());
    }
    let value = match kind {
        EvalKind::Theta => {
            let s = characteristic.context("--char is required for theta")?;
            let m = Characteristic::parse_with_genus(s, g)?;
            let v = engine.theta(tau, z, m)?;
            json!({ "characteristic": m.to_string(), "value": pair(v) })
        }
        EvalKind::Theta2 => {
            let values: Vec<_> = engine.theta2_all(tau, z)?.into_iter().map(pair).collect();
            json!({ "values": values })
        }
        EvalKind::Coble => {
            let e = coble_eval(&engine, tau, z)?;
            json!({ "value": pair(e.value), "scale": e.scale, "normalized": e.normalized() })
        }
        EvalKind::CobleGrad => {
            let grads: Vec<_> = coble_gradient(&engine, tau, z)?
                .iter()
                .map(|e| json!({ "value": pair(e.value), "scale": e.scale, "normalized": e.normalized() }))
                .collect();
            json!({ "gradient": grads })
        }
        EvalKind::Kummer2 => {
            let e = kummer2_eval(&engine, tau, z)?;
            json!({ "value": pair(e.value), "scale": e.scale, "normalized": e.normalized() })
        }
    };
    render(&value, || serde_json::to_string(&value).expect("json value"), format)
}

pub fn export_coble_formula() -> Vec<CobleFormulaRecord> {
    coble_formula_records()
}

pub fn export_coble_formula_json() -> String {
    serde_json::to_string_pretty(&export_coble_formula()).expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerations() {
        let even: Vec<String> = serde_json::from_str(&enumerate(EnumerateKind::Even, 3, Format::Json).unwrap()).unwrap();
        assert_eq!(even.len(), 36);
        assert_eq!(enumerate(EnumerateKind::Odd, 2, Format::Text).unwrap().lines().count(), 6);
        let fano: Vec<serde_json::Value> =
            serde_json::from_str(&enumerate(EnumerateKind::Fano, 3, Format::Json).unwrap()).unwrap();
        assert_eq!(fano.len(), 30);
        assert_eq!(fano[0]["kind"], "fano");
        assert!(enumerate(EnumerateKind::Pascal, 2, Format::Json).is_err());
        assert!(enumerate(EnumerateKind::Aronhold, 2, Format::Json).is_err());
    }

    #[test]
    fn evaluations() {
        let tau = PeriodMatrix64::imaginary_identity(2).unwrap();
        let out = eval(EvalKind::Theta, &tau, None, Some("01;01"), Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"][0], 0.0);
        assert!(eval(EvalKind::Theta, &tau, None, None, Format::Json).is_err());
        assert!(eval(EvalKind::Coble, &tau, None, None, Format::Json).is_err());
        let generic =
            PeriodMatrix64::from_parts(&[vec![0.1, 0.2], vec![0.2, -0.3]], &[vec![1.1, 0.25], vec![0.25, 0.9]]).unwrap();
        let k: serde_json::Value =
            serde_json::from_str(&eval(EvalKind::Kummer2, &generic, None, None, Format::Json).unwrap()).unwrap();
        assert!(k["normalized"].as_f64().unwrap() < 1e-10);
    }

    #[test]
    fn export_has_fifteen_records() {
        let v: Vec<serde_json::Value> = serde_json::from_str(&export_coble_formula_json()).unwrap();
        assert_eq!(v.len(), 15);
        assert_eq!(v[0]["quartic_label"], "Q_000");
        assert_eq!(v[0]["integer_combination"]["1"], 1);
    }
}
