//! Rule listings and `--explain` output.

use std::fmt::Write;

use heunkit_core::gauss::kummer_rules;
use heunkit_core::heun::generate_hl_group;
use heunkit_core::hyper3f2::{restricted_group, three_f2_psymbol, Restricted3F2Params};
use heunkit_core::psymbol::PSymbol;
use heunkit_core::scalar::{c, r};
use heunkit_core::signed_perm::{SignedPermutation, GAUSS_POINTS, HEUN_POINTS};
use heunkit_core::{GaussParams, HeunParams};

use crate::VerifyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Catalog {
    Gauss,
    Heun,
    #[value(name = "3f2")]
    F32,
}

struct Entry {
    name: String,
    label: SignedPermutation,
    formula: String,
}

fn entries(cat: Catalog) -> Result<Vec<Entry>, VerifyError> {
    Ok(match cat {
        Catalog::Gauss => kummer_rules(true)
            .into_iter()
            .map(|g| Entry { formula: g.formula(), name: g.name, label: g.label })
            .collect(),
        Catalog::Heun => generate_hl_group()?
            .into_iter()
            .map(|g| Entry { formula: g.formula(), name: g.name, label: g.label })
            .collect(),
        Catalog::F32 => restricted_group(true)
            .into_iter()
            .map(|g| Entry { formula: g.formula(), name: g.name, label: g.label })
            .collect(),
    })
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}\n")).collect()
}

pub fn list_rules(cat: Catalog) -> Result<String, VerifyError> {
    let mut out = String::new();
    for e in entries(cat)? {
        let _ = writeln!(out, "{}  {}", e.label, e.name);
        out.push_str(&indent(&e.formula));
    }
    Ok(out)
}

fn sample_heun() -> HeunParams {
    HeunParams::new(r(2.0), r(0.5), r(0.3), r(0.7), r(1.2), r(0.4))
}

fn sample_gauss() -> GaussParams {
    GaussParams::new(r(0.3), r(0.7), r(1.2))
}

fn sample_3f2() -> Restricted3F2Params {
    Restricted3F2Params::new(c(0.4, 0.1), r(1.3), c(2.6, -0.2), c(0.9, 0.3))
}

/// Describes every catalog rule whose label matches. Labels may use `inf` or `∞`.
pub fn explain(label: &str) -> Result<String, VerifyError> {
    let text = label.replace('∞', "inf").replace(' ', "");
    let mut out = String::new();
    for (cat, points) in [(Catalog::Gauss, GAUSS_POINTS), (Catalog::Heun, HEUN_POINTS), (Catalog::F32, GAUSS_POINTS)] {
        let Ok(want) = SignedPermutation::parse(points, &text) else { continue };
        for e in entries(cat)?.into_iter().filter(|e| e.label == want) {
            let _ = writeln!(out, "{:?} rule {} ({})", cat, e.label, e.name);
            out.push_str(&indent(&e.formula));
            out.push_str(&sample_symbols(cat, &e.name)?);
            out.push('\n');
        }
    }
    if out.is_empty() {
        return Err(VerifyError::UnknownRule(label.into()));
    }
    Ok(out)
}

fn sample_symbols(cat: Catalog, name: &str) -> Result<String, VerifyError> {
    let mut out = String::new();
    match cat {
        Catalog::Gauss => {
            let rule = kummer_rules(true).into_iter().find(|g| g.name == name).expect("listed rule");
            let p = sample_gauss();
            let q = rule.param_map(&p);
            let _ = writeln!(out, "  source P-symbol at {p}:");
            out.push_str(&indent(&PSymbol::gauss(&p).to_string()));
            let _ = writeln!(out, "  target P-symbol at {q}:");
            out.push_str(&indent(&PSymbol::gauss(&q).to_string()));
        }
        Catalog::Heun => {
            let rule = generate_hl_group()?.into_iter().find(|g| g.name == name).expect("listed rule");
            let p = sample_heun();
            let q = rule.param_map(&p);
            let _ = writeln!(out, "  source P-symbol at {p}:");
            out.push_str(&indent(&PSymbol::heun(&p).to_string()));
            let _ = writeln!(out, "  target P-symbol at {q}:");
            out.push_str(&indent(&PSymbol::heun(&q).to_string()));
        }
        Catalog::F32 => {
            let rule = restricted_group(true).into_iter().find(|g| g.name == name).expect("listed rule");
            let p = sample_3f2();
            let (q, _, _) = rule.transform(&p, r(0.2))?;
            let _ = writeln!(out, "  source P-symbol at {}:", p.to_three_f2());
            out.push_str(&indent(&three_f2_psymbol(&p.to_three_f2(), r(0.0)).to_string()));
            let _ = writeln!(out, "  target P-symbol at {}:", q.to_three_f2());
            out.push_str(&indent(&three_f2_psymbol(&q.to_three_f2(), r(0.0)).to_string()));
        }
    }
    Ok(out)
}
