//! One function per subcommand. Each returns a report whose `ok` flag decides
//! the exit code.

use std::sync::Mutex;
use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use koszulkit::algebra::tensor_cdga;
use koszulkit::bar::{bar_differential, bar_points, change_retraction_check, cobar, cobar_maps, PointConvention};
use koszulkit::duality::{adjunction_check, functor_f, functor_g};
use koszulkit::gallery;
use koszulkit::graded::{tensor, BasisElement};
use koszulkit::io::{terms_of, AlgebraFile, ModuleFile, Terms};
use koszulkit::mc::{enumerate_mc, is_mc, mc_residual, twist_algebra, EnumerationOptions};
use koszulkit::resolution::resolution_exactness;
use koszulkit::tensor_alg::{Derivation, Term, TruncatedTensorAlgebra};
use koszulkit::twisted::{hom_complex_to, TwistedModule};
use koszulkit::weq::{check_path_object, induced_maps, path_object, weak_equiv_oracle, TestFamily, Verdict};
use koszulkit::{CurvedDga, Field, GradedSpace};

use crate::input;
use crate::report::{Failure, Report, Scope};

pub struct Context {
    /// Field given on the command line; overrides the files.
    pub field: Option<Field>,
    pub default_field: Field,
    pub window: usize,
    pub bound: usize,
    pub opts: EnumerationOptions,
    /// The field actually used, for the report envelope.
    pub used_field: Mutex<Option<Field>>,
}

impl Context {
    fn note_field(&self, f: Field) {
        *self.used_field.lock().expect("not poisoned") = Some(f);
    }

    pub fn algebra(&self, path: &Path) -> Result<CurvedDga, Failure> {
        let a = input::algebra(path, self.field, self.default_field)?;
        self.note_field(a.field());
        Ok(a)
    }

    fn finite_field(&self) -> Field {
        let f = self.field.unwrap_or(self.default_field);
        self.note_field(f);
        f
    }

    fn enumeration_scope(&self) -> Scope {
        Scope::enumeration(self.opts.max_coordinates)
    }
}

type Outcome = Result<Report, Failure>;

fn show(t: &Terms) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter().map(|(n, c)| format!("{c}*{n}")).collect::<Vec<_>>().join(" + ")
}

fn show_cohomology(h: &BTreeMap<i32, usize>) -> String {
    let parts: Vec<String> = h.iter().filter(|(_, &d)| d > 0).map(|(k, d)| format!("H^{k} = {d}")).collect();
    if parts.is_empty() {
        "acyclic".into()
    } else {
        parts.join(", ")
    }
}

fn nonzero(h: BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    h.into_iter().filter(|&(_, d)| d > 0).collect()
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

pub fn check(ctx: &Context, path: &Path) -> Outcome {
    let a = input::unchecked_algebra(path, ctx.field, ctx.default_field)?;
    ctx.note_field(a.field());
    let certificate = a.check_axioms();
    let augmented = a.retraction().map(|e| a.is_augmentation(e));
    let mut text = format!(
        "dimension {}, {}, axioms {}",
        a.dim(),
        if a.is_curved() { "curved" } else { "uncurved" },
        status(certificate.is_ok())
    );
    for v in &certificate.violations {
        text.push_str(&format!("\n  {} fails at ({})", v.identity, v.witness.join(", ")));
    }
    let result = json!({
        "dim": a.dim(),
        "basis": a.space().basis(),
        "curved": a.is_curved(),
        "retraction_is_augmentation": augmented,
        "certificate": certificate,
    });
    Ok(Report::new(certificate.is_ok(), Scope::exact(), result, text))
}

pub fn mc_list(ctx: &Context, path: &Path) -> Outcome {
    let a = ctx.algebra(path)?;
    let elements: Vec<Terms> = enumerate_mc(&a, &ctx.opts)?.iter().map(|x| terms_of(a.space(), &x.coords)).collect();
    let mut text = format!("{} Maurer–Cartan elements", elements.len());
    for e in &elements {
        text.push_str(&format!("\n  {}", show(e)));
    }
    let result = json!({ "count": elements.len(), "elements": elements });
    Ok(Report::new(true, ctx.enumeration_scope(), result, text))
}

pub fn mc_verify(ctx: &Context, path: &Path, element: &str) -> Outcome {
    let a = ctx.algebra(path)?;
    let x = input::element(a.space(), element)?;
    let certificate = is_mc(&a, &x)?;
    let residual = terms_of(a.space(), &mc_residual(&a, &x));
    let text = format!("h + dx + x² = {}: {}", show(&residual), status(certificate.is_ok()));
    let result = json!({
        "element": terms_of(a.space(), &x),
        "residual": residual,
        "certificate": certificate,
    });
    Ok(Report::new(certificate.is_ok(), Scope::exact(), result, text))
}

pub fn twist(ctx: &Context, path: &Path, element: &str) -> Outcome {
    let a = ctx.algebra(path)?;
    let b = input::element(a.space(), element)?;
    let t = twist_algebra(&a, &b)?;
    let certificate = t.check_axioms();
    let curvature = terms_of(t.space(), t.curvature());
    let text = format!("curvature of the twist: {}; axioms {}", show(&curvature), status(certificate.is_ok()));
    let result = json!({
        "algebra": AlgebraFile::from_algebra(&t),
        "curvature": curvature,
        "maurer_cartan": !t.is_curved(),
        "certificate": certificate,
    });
    Ok(Report::new(certificate.is_ok(), Scope::exact(), result, text))
}

#[derive(Serialize)]
struct TableRow {
    generator: String,
    degree: i32,
    value: Vec<Term>,
    text: String,
}

fn derivation_table(alg: &TruncatedTensorAlgebra, d: &Derivation) -> Vec<TableRow> {
    (0..alg.ngens())
        .map(|k| TableRow {
            generator: alg.generators().name(k).to_string(),
            degree: alg.generators().degree(k),
            value: alg.terms_sorted(&d.values[k]),
            text: alg.format(&d.values[k]),
        })
        .collect()
}

fn show_table(rows: &[TableRow], symbol: &str) -> String {
    rows.iter().map(|r| format!("\n  {symbol}({}) = {}", r.generator, r.text)).collect()
}

fn retraction(a: &CurvedDga, text: Option<&str>) -> Result<Option<Vec<koszulkit::FieldElement>>, Failure> {
    text.map(|s| input::element(a.space(), s)).transpose()
}

pub fn cobar_cmd(ctx: &Context, path: &Path, eps: Option<&str>) -> Outcome {
    let c = ctx.algebra(path)?;
    let eps = retraction(&c, eps)?;
    let cb = cobar(&c, eps.as_deref(), ctx.window)?;
    let r = cb.algebra();
    let table = derivation_table(r, cb.differential());
    let curvature = r.terms_sorted(&cb.curvature());
    let (certificate, exact) = cb.check_d_squared();
    let text = format!(
        "cobar differential on {} generators:{}\ncurvature: {}\nd² {} on words up to length {exact}",
        r.ngens(),
        show_table(&table, "d"),
        r.format(&cb.curvature()),
        if certificate.is_ok() { "certified" } else { "FAILED" },
    );
    let result = json!({
        "differential": table,
        "curvature": curvature,
        "certificate": certificate,
        "exact_length": exact,
    });
    Ok(Report::new(certificate.is_ok(), Scope::window(ctx.window), result, text))
}

pub fn bar_cmd(ctx: &Context, path: &Path, eps: Option<&str>) -> Outcome {
    let a = ctx.algebra(path)?;
    let eps = retraction(&a, eps)?;
    let bar = bar_differential(&a, eps.as_deref(), ctx.window)?;
    let report = bar.check_identities();
    let xi = derivation_table(&bar.extended, &bar.xi);
    let xi1 = derivation_table(&bar.reduced, &bar.xi1);
    let r = &bar.reduced;
    let ok = report.xi_squared_zero && report.curvature_identity;
    let text = format!(
        "ξ on the τ-extended algebra:{}\nξ₁:{}\ncurvature -g: {}\nξ² = 0: {}; ξ₁² = [-g, -]: {}; signed form fails on [{}]; exact to length {}",
        show_table(&xi, "ξ"),
        show_table(&xi1, "ξ₁"),
        r.format(&bar.curvature()),
        status(report.xi_squared_zero),
        status(report.curvature_identity),
        report.signed_failures.join(", "),
        report.exact_length,
    );
    let result = json!({
        "xi": xi,
        "xi1": xi1,
        "g": r.terms_sorted(&bar.g),
        "curvature": r.terms_sorted(&bar.curvature()),
        "identities": report,
    });
    Ok(Report::new(ok, Scope::window(ctx.window), result, text))
}

pub fn bar_points_cmd(ctx: &Context, a_path: &Path, c_path: &Path, augmented: bool) -> Outcome {
    let a = ctx.algebra(a_path)?;
    let c = ctx.algebra(c_path)?;
    let convention = if augmented { PointConvention::Augmented } else { PointConvention::Curved };
    let host = tensor(a.space(), c.space())?;
    let points: Vec<Terms> =
        bar_points(&a, &c, convention, &ctx.opts)?.iter().map(|x| terms_of(&host, &x.coords)).collect();
    let mut text = format!("{} points ({convention:?} convention)", points.len());
    for p in &points {
        text.push_str(&format!("\n  {}", show(p)));
    }
    let result = json!({ "convention": convention, "count": points.len(), "points": points });
    Ok(Report::new(true, ctx.enumeration_scope(), result, text))
}

pub fn cobar_maps_cmd(ctx: &Context, c_path: &Path, a_path: &Path) -> Outcome {
    let c = ctx.algebra(c_path)?;
    let a = ctx.algebra(a_path)?;
    let host = tensor(a.space(), c.space())?;
    let maps = cobar_maps(&c, &a, &ctx.opts)?;
    let mut text = format!("{} dg maps ΩC → A", maps.len());
    let entries: Vec<_> = maps
        .iter()
        .map(|(m, x)| {
            let images: BTreeMap<&str, Terms> =
                m.generators.iter().map(String::as_str).zip(m.images.iter().map(|v| terms_of(a.space(), v))).collect();
            let line: Vec<String> = images.iter().map(|(g, t)| format!("{g} ↦ {}", show(t))).collect();
            text.push_str(&format!("\n  {}", line.join(", ")));
            json!({ "images": images, "point": terms_of(&host, &x.coords) })
        })
        .collect();
    let result = json!({ "count": maps.len(), "maps": entries });
    Ok(Report::new(true, ctx.enumeration_scope(), result, text))
}

pub fn retraction_iso(ctx: &Context, path: &Path, from: &str, to: &str) -> Outcome {
    let a = ctx.algebra(path)?;
    let e1 = input::element(a.space(), from)?;
    let e2 = input::element(a.space(), to)?;
    let certificate = change_retraction_check(&a, &e1, &e2, ctx.window)?;
    let text = format!("change of retraction: {}", status(certificate.is_ok()));
    Ok(Report::new(certificate.is_ok(), Scope::window(ctx.window), json!({ "certificate": certificate }), text))
}

pub fn resolution(ctx: &Context, degrees: &[i32], max_length: usize) -> Outcome {
    let field = ctx.finite_field();
    let basis: Vec<BasisElement> =
        degrees.iter().enumerate().map(|(i, &d)| BasisElement { name: format!("v{i}"), degree: d }).collect();
    let v = GradedSpace::new(field, basis)?;
    let report = resolution_exactness(&v, max_length);
    let mut text = String::new();
    for c in &report.components {
        text.push_str(&format!(
            "n = {}: dims {:?}, ranks {} and {}, {}\n",
            c.length,
            c.dims,
            c.rank_d,
            c.rank_m,
            if c.exact { "exact" } else { "NOT exact" }
        ));
    }
    let ok = report.certificate.is_ok();
    text.push_str(&format!("resolution {}", status(ok)));
    let scope = Scope {
        max_length: Some(max_length),
        notes: vec![format!("word-length components n <= {max_length}")],
        ..Default::default()
    };
    Ok(Report::new(ok, scope, report, text))
}

pub fn hom(ctx: &Context, a_path: &Path, t_path: &Path, m_path: &Path) -> Outcome {
    let a = ctx.algebra(a_path)?;
    let t = input::module(t_path, &a)?;
    let m = input::module(m_path, &a)?;
    let h = hom_complex_to(t.twisted()?, &m.dg())?;
    let ok = h.certificate.is_ok();
    let cohomology = if ok { Some(nonzero(h.cohomology()?)) } else { None };
    let text = match &cohomology {
        Some(c) => format!("Hom complex of dimension {}: {}", h.space.dim(), show_cohomology(c)),
        None => "Hom complex does not square to zero".into(),
    };
    let result = json!({ "dim": h.space.dim(), "cohomology": cohomology, "certificate": h.certificate });
    Ok(Report::new(ok, Scope::exact(), result, text))
}

fn load_map(
    ctx: &Context,
    a_path: &Path,
    m_path: &Path,
    n_path: &Path,
    f_path: &Path,
) -> Result<koszulkit::twisted::ModuleMap, Failure> {
    let a = ctx.algebra(a_path)?;
    let m = input::module(m_path, &a)?.dg();
    let n = input::module(n_path, &a)?.dg();
    input::map(f_path, &m, &n)
}

pub fn weq(ctx: &Context, a: &Path, m: &Path, n: &Path, f: &Path) -> Outcome {
    if ctx.bound == 0 {
        return Err(Failure::usage("--bound 0 gives an empty test family"));
    }
    let f = load_map(ctx, a, m, n, f)?;
    let verdict = weak_equiv_oracle(&f, &TestFamily::new(ctx.bound), &ctx.opts)?;
    let text = match &verdict {
        Verdict::Refuted { tested, witness, .. } => format!(
            "refuted by test module {} with degrees {:?} (after {tested} tests): Hom into the cone has {}",
            witness.x.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            witness.degrees,
            show_cohomology(&witness.cohomology)
        ),
        Verdict::ConfirmedUpTo { bound, tested, .. } => {
            format!("confirmed up to bound {bound}: {tested} test modules see an acyclic cone")
        }
    };
    let ok = !verdict.is_refuted();
    Ok(Report::new(ok, Scope::oracle(ctx.bound, ctx.opts.max_coordinates), verdict, text))
}

pub fn quasi_iso(ctx: &Context, a: &Path, m: &Path, n: &Path, f: &Path) -> Outcome {
    let f = load_map(ctx, a, m, n, f)?;
    let maps = induced_maps(&f)?;
    let ok = maps.iter().all(|m| m.is_iso());
    let mut text = String::new();
    for m in &maps {
        text.push_str(&format!("degree {}: H {} → {}, rank {}\n", m.degree, m.source_dim, m.target_dim, m.rank));
    }
    text.push_str(&format!("quasi-isomorphism: {}", if ok { "yes" } else { "no" }));
    Ok(Report::new(ok, Scope::exact(), json!({ "quasi_isomorphism": ok, "degrees": maps }), text))
}

pub fn path_object_cmd(ctx: &Context, a_path: &Path, m_path: &Path) -> Outcome {
    let a = ctx.algebra(a_path)?;
    let m = input::module(m_path, &a)?.dg();
    let path = path_object(&m)?;
    let family = (ctx.bound > 0).then(|| TestFamily::new(ctx.bound));
    let report = check_path_object(&path, family.as_ref(), &ctx.opts)?;
    let confirmed = report.e_verdict.as_ref().is_none_or(|v| !v.is_refuted());
    let ok = report.surjective && report.factors_diagonal && report.certificate.is_ok() && confirmed;
    let text = format!(
        "I⊗M of dimension {}; (p1, p2) onto: {}; p∘e diagonal: {}; e quasi-iso: {}; oracle on e: {}",
        path.cylinder.dim(),
        status(report.surjective),
        status(report.factors_diagonal),
        report.e_quasi_iso.map_or("n/a", |q| if q { "yes" } else { "no" }),
        match &report.e_verdict {
            Some(Verdict::ConfirmedUpTo { bound, .. }) => format!("confirmed up to {bound}"),
            Some(Verdict::Refuted { .. }) => "refuted".into(),
            None => "skipped".into(),
        }
    );
    let result = json!({
        "cylinder_dim": path.cylinder.dim(),
        "interval_cohomology": path.interval_cohomology,
        "report": report,
    });
    let scope = match family {
        Some(f) => Scope::oracle(f.max_dim, ctx.opts.max_coordinates),
        None => Scope::exact(),
    };
    Ok(Report::new(ok, scope, result, text))
}

fn functor_report(t: &TwistedModule, over: &str) -> Outcome {
    let m = t.underlying();
    let certificate = m.check_axioms();
    let cohomology = if t.algebra().is_curved() { None } else { Some(nonzero(m.cohomology()?)) };
    let text = format!(
        "twisted module over {over} of rank {}; {}",
        t.space().dim(),
        cohomology.as_ref().map_or("curved, no cohomology".into(), show_cohomology)
    );
    let result = json!({ "module": ModuleFile::from_twisted(t), "cohomology": cohomology, "certificate": certificate });
    Ok(Report::new(certificate.is_ok(), Scope::exact(), result, text))
}

fn point(a: &CurvedDga, b: &CurvedDga, x: &str) -> Result<Vec<koszulkit::FieldElement>, Failure> {
    let host = tensor_cdga(a, b)?;
    input::element(host.space(), x)
}

pub fn functor(ctx: &Context, a_path: &Path, b_path: &Path, x: &str, m_path: &Path, g: bool) -> Outcome {
    let a = ctx.algebra(a_path)?;
    let b = ctx.algebra(b_path)?;
    let x = point(&a, &b, x)?;
    if g {
        let n = input::module(m_path, &b)?.dg();
        functor_report(&functor_g(&a, &b, &x, &n)?, "A")
    } else {
        let m = input::module(m_path, &a)?.dg();
        functor_report(&functor_f(&a, &b, &x, &m)?, "B")
    }
}

pub fn adjoint(ctx: &Context, a_path: &Path, b_path: &Path, x: &str, m_path: &Path, n_path: &Path) -> Outcome {
    let a = ctx.algebra(a_path)?;
    let b = ctx.algebra(b_path)?;
    let x = point(&a, &b, x)?;
    let m = input::module(m_path, &a)?.dg();
    let n = input::module(n_path, &b)?.dg();
    let r = adjunction_check(&a, &b, &x, &m, &n)?;
    let ok = r.certificate.is_ok();
    let text = format!(
        "Hom_A(G_x N, M): {}\nHom_B(F_x M, N): {}\nadjunction {}",
        show_cohomology(&r.hom_g),
        show_cohomology(&r.hom_f),
        status(ok)
    );
    Ok(Report::new(ok, Scope::exact(), r, text))
}

pub fn gallery_cmd(ctx: &Context, name: &str) -> Outcome {
    let field = ctx.finite_field();
    match name {
        "kx2" => {
            let r = gallery::kx2(field, &ctx.opts)?;
            let mut text = format!("k[x]/x² over {field}: |MC| = {}\nHom cohomology table:", r.mc_count);
            for row in &r.hom {
                let cells: Vec<String> = row.iter().map(show_cohomology).collect();
                text.push_str(&format!("\n  {}", cells.join(" | ")));
            }
            text.push_str(&format!(
                "\nbar points: {} (curved), {} (augmented)\npairwise inequivalent: {}",
                r.bar_points, r.bar_points_augmented, r.pairwise_inequivalent
            ));
            let scope = Scope::oracle(1, ctx.opts.max_coordinates);
            Ok(Report::new(r.ok, scope, &r, text))
        }
        "adjunction" => {
            let r = gallery::adjunction(field)?;
            let mut text = String::new();
            for c in &r.cases {
                text.push_str(&format!(
                    "x = [{}], M = {}, N = {}: {} / {} {}\n",
                    c.x.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                    c.m,
                    c.n,
                    show_cohomology(&c.hom_g),
                    show_cohomology(&c.hom_f),
                    status(c.ok)
                ));
            }
            text.push_str(&format!("adjunction {}", status(r.ok)));
            Ok(Report::new(r.ok, Scope::exact(), &r, text))
        }
        "representability" => {
            let r = gallery::representability(field, &ctx.opts)?;
            let mut text = String::new();
            for c in &r.cases {
                text.push_str(&format!(
                    "C = {}, A = {}: maps {}, MC {}, points {} {}\n",
                    c.c,
                    c.a,
                    c.cobar_maps,
                    c.reduced_mc,
                    c.bar_points,
                    status(c.ok)
                ));
            }
            text.push_str(&format!("representability {}", status(r.ok)));
            Ok(Report::new(r.ok, ctx.enumeration_scope(), &r, text))
        }
        other => Err(Failure::usage(format!(
            "unknown gallery {other:?}; available: {}",
            gallery::NAMES.join(", ")
        ))),
    }
}
