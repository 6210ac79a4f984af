//! Text, LaTeX and serializable renderings of a [`Presentation`].

use serde::Serialize;

use super::presentation::Presentation;
use crate::flagcomb::FlagType;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub latex: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationDoc {
    pub label: String,
    pub degree: usize,
    pub text: String,
    pub latex: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationDoc {
    pub m: usize,
    pub nu: FlagType,
    pub case: u8,
    pub generators: Vec<GeneratorDoc>,
    pub relations: Vec<RelationDoc>,
}

pub fn to_doc(p: &Presentation) -> PresentationDoc {
    let m = p.m;
    PresentationDoc {
        m,
        nu: p.nu.clone(),
        case: if m.is_multiple_of(2) { 1 } else { 2 },
        generators: p
            .generators
            .iter()
            .map(|g| GeneratorDoc { name: g.to_text(m), latex: g.to_latex(m), degree: g.degree(m) })
            .collect(),
        relations: p
            .relations
            .iter()
            .map(|r| RelationDoc {
                label: r.label.clone(),
                degree: r.polynomial.homogeneous_degree(m).unwrap_or(0),
                text: r.polynomial.render(false, m),
                latex: r.polynomial.render(true, m),
            })
            .collect(),
    }
}

pub fn to_text(p: &Presentation) -> String {
    let doc = to_doc(p);
    let mut s = format!(
        "H^*(P({}, {}); R), 2 invertible in R  [case {}: m {}]\n\ngenerators:\n",
        doc.m,
        doc.nu,
        doc.case,
        if doc.case == 1 { "even" } else { "odd" }
    );
    for g in &doc.generators {
        s.push_str(&format!("  {:<16} degree {}\n", g.name, g.degree));
    }
    s.push_str(&format!("\nrelations ({}):\n", doc.relations.len()));
    for r in &doc.relations {
        s.push_str(&format!("  [{}] {}\n", r.label, r.text));
    }
    s
}

fn latex_label(label: &str) -> String {
    match label.split_once(' ') {
        Some((tag, _)) if tag.starts_with('(') => format!("\\text{{{tag}}}"),
        _ => {
            let (name, idx) = label.split_once('_').unwrap_or((label, ""));
            format!("{name}_{{{idx}}}")
        }
    }
}

pub fn to_latex(p: &Presentation) -> String {
    let doc = to_doc(p);
    let gens: Vec<&str> = doc.generators.iter().map(|g| g.latex.as_str()).collect();
    let degrees: Vec<String> = doc.generators.iter().map(|g| format!("|{}| = {}", g.latex, g.degree)).collect();
    let mut s = String::new();
    s.push_str(&format!("% H^*(P({}, {}); R), case {}\n", doc.m, doc.nu, doc.case));
    s.push_str("\\begin{aligned}\n");
    s.push_str(&format!("\\mathcal R &= R[{}]\\\\\n", gens.join(",\\; ")));
    s.push_str(&format!("&{}\\\\\n", degrees.join(",\\; ")));
    s.push_str("\\mathcal J &= \\langle\n");
    for (i, r) in doc.relations.iter().enumerate() {
        let sep = if i + 1 == doc.relations.len() { "" } else { "," };
        s.push_str(&format!("  &\\quad {}:\\; {}{}\\\\\n", latex_label(&r.label), r.latex, sep));
    }
    s.push_str("&\\rangle\n\\end{aligned}\n");
    s
}
