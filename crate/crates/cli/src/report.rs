//! JSON report envelope. Field order is declaration order; floats use the
//! shortest representation that round-trips, non-finite values become the
//! strings `"inf"`, `"-inf"` and `"nan"`.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // fold -0.0 into 0.0 so reports never show a signed zero
        let v = self.0 + 0.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_infinite() {
            f.write_str(if self.0 > 0.0 { "inf" } else { "-inf" })
        } else {
            write!(f, "{:.10e}", self.0)
        }
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BodyEcho {
    pub sha256: String,
    pub n: usize,
    pub f: String,
    pub delta: Num,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureRow {
    /// 1-based frame index `j` of `u^j`, absent for user directions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub direction: Vec<Num>,
    pub gamma_hat: Num,
    pub kappa_hat: Num,
    pub radius_hat: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremaResult {
    pub kappa_min: Num,
    pub kappa_max: Num,
    pub dir_min: Vec<Num>,
    pub dir_max: Vec<Num>,
    pub radius_min: Num,
    pub radius_max: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldmanResult {
    pub j: usize,
    pub tangent: Vec<Num>,
    pub k_general: Num,
    pub k_closed: Num,
    pub kappa_hat: Num,
    /// `k_closed / (2κ̂)`, absent when `κ̂ = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Num>,
    pub general_closed_rel_diff: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub direction: Vec<Num>,
    pub gamma_hat: Num,
    pub gamma_estimate: Num,
    pub gamma_residual: Num,
    /// `[r_k, Ĉ(r_k)/r_k²]` pairs.
    pub sequence: Vec<[Num; 2]>,
    pub eps: Num,
    pub radius_target: Num,
    pub radius_containment: Num,
    pub radius_residual: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeResult {
    pub value: Num,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvatures: Option<Vec<CurvatureRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrema: Option<ExtremaResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub goldman: Option<GoldmanResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub body: BodyEcho,
    pub point: Vec<Num>,
    /// 1-based pivot coordinate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<Num>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub directions: Vec<Vec<Num>>,
    pub results: Results,
    pub warnings: Vec<Warning>,
}

impl Envelope {
    /// Adds a warning unless an identical one is already present.
    pub fn warn(&mut self, code: &'static str, message: impl Into<String>) {
        let w = Warning {
            code,
            message: message.into(),
        };
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Aligned plain-text summary.
    pub fn table(&self) -> String {
        let mut rows: Vec<[String; 2]> = Vec::new();
        let mut push = |k: String, v: String| rows.push([k, v]);
        push("command".into(), self.command.into());
        push(
            "body".into(),
            format!("{} (n = {})", self.body.f, self.body.n),
        );
        push("point".into(), join(&self.point));
        if let Some(p) = self.pivot {
            push("pivot".into(), p.to_string());
        }
        let r = &self.results;
        for c in r.curvatures.iter().flatten() {
            let label = label(c.j, &c.direction);
            push(format!("kappa_hat {label}"), c.kappa_hat.to_string());
            push(format!("gamma_hat {label}"), c.gamma_hat.to_string());
            push(format!("radius_hat {label}"), c.radius_hat.to_string());
        }
        if let Some(e) = &r.extrema {
            push("kappa_min".into(), e.kappa_min.to_string());
            push("kappa_max".into(), e.kappa_max.to_string());
        }
        if let Some(g) = &r.goldman {
            push(format!("k_general j={}", g.j), g.k_general.to_string());
            push(format!("k_closed j={}", g.j), g.k_closed.to_string());
            if let Some(ratio) = g.ratio {
                push("ratio".into(), ratio.to_string());
            }
        }
        for o in r.oracle.iter().flatten() {
            let label = label(o.j, &o.direction);
            push(
                format!("gamma_estimate {label}"),
                o.gamma_estimate.to_string(),
            );
            push(
                format!("gamma_residual {label}"),
                o.gamma_residual.to_string(),
            );
            push(
                format!("radius_containment {label}"),
                o.radius_containment.to_string(),
            );
            push(
                format!("radius_residual {label}"),
                o.radius_residual.to_string(),
            );
        }
        if let Some(g) = &r.gauge {
            push("gauge".into(), g.value.to_string());
        }
        for w in &self.warnings {
            push(format!("warning {}", w.code), w.message.clone());
        }
        let width = rows.iter().map(|r| r[0].chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for [k, v] in rows {
            let pad = width - k.chars().count();
            let _ = writeln!(out, "{k}{}  {v}", " ".repeat(pad));
        }
        out
    }
}

fn join(v: &[Num]) -> String {
    v.iter()
        .map(|x| x.0.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn label(j: Option<usize>, dir: &[Num]) -> String {
    match j {
        Some(j) => format!("u^{j}"),
        None => format!("[{}]", join(dir)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_are_strings() {
        let v =
            serde_json::to_string(&nums(&[1.5, f64::INFINITY, f64::NEG_INFINITY, 0.1])).unwrap();
        assert_eq!(v, r#"[1.5,"inf","-inf",0.1]"#);
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1 + 0.2, 1.0 / 3.0, 6.02214076e23, -2.5e-300] {
            let s = serde_json::to_string(&Num(x)).unwrap();
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
            assert!(digits <= 17 + 3, "{s}");
        }
    }
}
