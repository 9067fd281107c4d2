//! Serializable summary of one decomposition run.

use std::fmt::Write as _;

use serde::Serialize;

use crate::decomp::{verify, Decomposition, Ortho, Verdict};
use crate::form::{format_linear_form, Form};
use crate::idem::{AlgebraFactor, Certificate};
use crate::matrix::Matrix;
use crate::scalar::Mode;

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    /// 1-based indices of the `y` variables.
    pub variables: Vec<usize>,
    pub form: String,
    pub form_in_x: String,
}

/// Every field is always present; inapplicable entries are null.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub input: String,
    pub mode: Mode,
    pub field: String,
    pub auto_adjoined: Vec<i64>,
    pub n: usize,
    pub d: u32,
    pub rank: usize,
    pub center_dim: usize,
    pub center_algebra: String,
    pub center_factors: Vec<AlgebraFactor>,
    pub verdict: Verdict,
    pub lambdas: Option<Vec<String>>,
    pub forms: Option<Vec<String>>,
    pub blocks: Vec<BlockReport>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<String>>,
    pub ortho: Ortho,
    pub scaling_in_field: Option<bool>,
    pub odeco_precheck: Option<bool>,
    pub certificates: Vec<Certificate>,
    pub verified: bool,
    pub timing_ms: f64,
}

fn matrix_text(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vectors()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect()
}

impl Report {
    pub fn new(
        input: &str,
        f: &Form,
        dec: &Decomposition,
        odeco_precheck: Option<bool>,
        timing_ms: f64,
    ) -> Report {
        let mode = if dec.field.is_exact() { Mode::Exact } else { Mode::Float };
        Report {
            input: input.to_string(),
            mode,
            field: dec.field.to_string(),
            auto_adjoined: dec.auto_adjoined.clone(),
            n: dec.n,
            d: dec.d,
            rank: dec.rank,
            center_dim: dec.center_dim,
            center_algebra: dec.center_algebra.to_string(),
            center_factors: dec.center_algebra.factors.clone(),
            verdict: dec.verdict,
            lambdas: dec
                .lambdas
                .as_ref()
                .map(|l| l.iter().map(|x| x.to_string()).collect()),
            forms: dec
                .forms
                .as_ref()
                .map(|l| l.row_vectors().iter().map(|r| format_linear_form(r)).collect()),
            blocks: dec
                .blocks
                .iter()
                .map(|b| BlockReport {
                    variables: b.variables.iter().map(|v| v + 1).collect(),
                    form: b.form.to_text("y"),
                    form_in_x: b.form_in_x.to_text("x"),
                })
                .collect(),
            p: matrix_text(&dec.p),
            ortho: dec.ortho,
            scaling_in_field: dec.scaling_in_field,
            odeco_precheck,
            certificates: dec.certificates.clone(),
            verified: verify(dec, f),
            timing_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "input:      {}", self.input);
        let _ = writeln!(s, "field:      {}", self.field);
        if !self.auto_adjoined.is_empty() {
            let _ = writeln!(s, "adjoined:   {:?}", self.auto_adjoined);
        }
        let _ = writeln!(s, "n, d, rank: {}, {}, {}", self.n, self.d, self.rank);
        let _ = writeln!(s, "center:     dim {} = {}", self.center_dim, self.center_algebra);
        let _ = writeln!(s, "verdict:    {}", self.verdict);
        if let (Some(l), Some(f)) = (&self.lambdas, &self.forms) {
            let terms: Vec<String> = l
                .iter()
                .zip(f)
                .map(|(c, r)| format!("({c})*({r})^{}", self.d))
                .collect();
            let _ = writeln!(s, "f =         {}", terms.join(" + "));
        } else {
            for b in &self.blocks {
                let _ = writeln!(s, "block {:?}: {}", b.variables, b.form_in_x);
            }
        }
        let _ = writeln!(s, "P:          {:?}", self.p);
        let _ = writeln!(s, "ortho:      {}", self.ortho);
        if let Some(b) = self.scaling_in_field {
            let _ = writeln!(s, "scaling in field: {b}");
        }
        if let Some(b) = self.odeco_precheck {
            let _ = writeln!(s, "odeco precheck:   {b}");
        }
        for c in &self.certificates {
            let _ = writeln!(s, "certificate: {}", serde_json::to_string(c).unwrap_or_default());
        }
        let _ = writeln!(s, "verified:   {}", self.verified);
        let _ = write!(s, "time:       {:.2} ms", self.timing_ms);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::decompose;
    use crate::form::{parse_form, parse_linear_form, parse_scalar};
    use crate::harness::expand_powersum;
    use crate::scalar::FieldConfig;

    #[test]
    fn json_fields_and_round_trip() {
        let cfg = FieldConfig::exact(&[2]);
        let k = cfg.field().unwrap();
        let text = "x1^3-3*x1^2*x2+3*x1*x2^2+3*x1^2*x3+3*x1*x3^2-6*x1*x2*x3+13*x2^3-3*x2^2*x3-9*x2*x3^2+15*x3^3";
        let f = parse_form(text, &k).unwrap();
        let dec = decompose(&f, &cfg).unwrap();
        let rep = Report::new(text, &f, &dec, None, 1.0);
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        for key in [
            "input", "mode", "field", "n", "d", "rank", "center_dim", "center_algebra",
            "verdict", "lambdas", "forms", "blocks", "P", "ortho", "scaling_in_field",
            "odeco_precheck", "certificates", "verified", "timing_ms",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["verdict"], "diagonalizable");
        assert!(v["odeco_precheck"].is_null());

        let lambdas: Vec<_> = rep
            .lambdas
            .unwrap()
            .iter()
            .map(|s| parse_scalar(s, &k).unwrap())
            .collect();
        let rows: Vec<_> = rep
            .forms
            .unwrap()
            .iter()
            .map(|s| parse_linear_form(s, &k, 3).unwrap())
            .collect();
        assert_eq!(expand_powersum(&lambdas, &rows, 3, &k), f);
    }

    #[test]
    fn blocks_round_trip() {
        let cfg = FieldConfig::rational();
        let k = cfg.field().unwrap();
        let text = "x1^3-3*x1^2*x2+3*x1*x2^2+3*x1^2*x3+3*x1*x3^2-6*x1*x2*x3+13*x2^3-3*x2^2*x3-9*x2*x3^2+15*x3^3";
        let f = parse_form(text, &k).unwrap();
        let rep = Report::new(text, &f, &decompose(&f, &cfg).unwrap(), Some(false), 0.0);
        assert!(rep.lambdas.is_none());
        let mut sum = Form::zero(3, 3, &k);
        for b in &rep.blocks {
            sum = sum
                .add(&crate::form::parse_form_with_vars(&b.form_in_x, &k, 3).unwrap())
                .unwrap();
        }
        assert_eq!(sum, f);
        assert!(rep.to_text().contains("direct_sum"));
    }
}
