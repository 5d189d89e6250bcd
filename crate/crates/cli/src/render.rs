//! Rendering of library results into the stable report tree.
//!
//! Every function here maps one result type to a [`Report`] with a fixed
//! field order, translating point identifiers back into the instance's
//! labels. Nothing is computed here beyond presentation; the values come
//! verified from the library.

use quasivar::gen::PreorderKind;
use quasivar::instance::is_increasingly_lsc;
use quasivar::io::CompiledInstance;
use quasivar::oracle::EquivalenceReport;
use quasivar::picard::PicardRun;
use quasivar::preorder::check_d_ord;
use quasivar::principles::{
    CaristiResult, EkelandCertificate, FullEkelandCertificate, MapKind, T1Caristi, T1Ekeland,
    T1Takahashi, TakahashiReport, TakahashiVariant,
};
use quasivar::report::Report;
use quasivar::witness::{WitnessReport, WitnessSpace};
use quasivar::{PointId, PointSet};

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

fn label(labels: &[String], x: PointId) -> &str {
    &labels[x.0]
}

fn opt_label(labels: &[String], x: Option<PointId>) -> String {
    x.map_or_else(|| "none".to_string(), |x| labels[x.0].clone())
}

fn set(labels: &[String], s: &PointSet) -> String {
    let names: Vec<&str> = s.iter().map(|x| label(labels, x)).collect();
    format!("{{{}}}", names.join(", "))
}

fn path(labels: &[String], run: &PicardRun) -> String {
    let stops: Vec<&str> = run.steps.iter().map(|s| label(labels, s.point)).collect();
    stops.join(" -> ")
}

fn pairs(labels: &[String], ps: &[(PointId, PointId)]) -> String {
    let arrows: Vec<String> = ps
        .iter()
        .map(|(x, y)| format!("{}->{}", label(labels, *x), label(labels, *y)))
        .collect();
    arrows.join(", ")
}

pub fn kind_name(kind: PreorderKind) -> &'static str {
    match kind {
        PreorderKind::Total => "total",
        PreorderKind::Pairs => "pairs",
        PreorderKind::Reachability => "reachability",
        PreorderKind::SpecializationConjugate => "specialization-conjugate",
    }
}

/// Summary and audit report for `validate`. Failing audits come with the
/// witness pair that breaks them.
pub fn validate_report(c: &CompiledInstance) -> Report {
    let inst = c.instance();
    let labels = c.labels();
    let audits = inst.audits();
    let mut r = Report::new();
    r.value("points", inst.n());
    r.value("domain", set(labels, &inst.dom()));
    r.value("t1", inst.space().is_t1());
    r.value("symmetric", inst.space().is_symmetric());
    r.value("total_order", inst.order().is_total());
    r.section("audits", |s| {
        s.value("d_ord", audits.d_ord);
        if let Some((x, y)) = check_d_ord(inst.space(), inst.order()).witness {
            s.value(
                "d_ord_witness",
                format!(
                    "d({}, {}) = 0 but not {} <= {}",
                    label(labels, x),
                    label(labels, y),
                    label(labels, y),
                    label(labels, x)
                ),
            );
        }
        s.value("inc_lsc", audits.inc_lsc);
        if let Some((x, y)) = is_increasingly_lsc(inst.space(), inst.phi()).witness {
            s.value(
                "inc_lsc_witness",
                format!(
                    "d({}, {}) = 0 but phi({}) > phi({})",
                    label(labels, x),
                    label(labels, y),
                    label(labels, x),
                    label(labels, y)
                ),
            );
        }
        s.value("proper", audits.proper);
    });
    r.value("audits_ok", audits.all());
    r
}

pub fn wek_report(c: &CompiledInstance, cert: &EkelandCertificate, t1: Option<&T1Ekeland>) -> Report {
    let labels = c.labels();
    let mut r = Report::new();
    r.value("principle", "weak-ekeland");
    r.section("run", |s| {
        s.value("start", label(labels, cert.run.start));
        s.value("rule", cert.run.rule.name());
        s.value("moves", cert.run.steps.len().saturating_sub(1));
        s.value("path", path(labels, &cert.run));
    });
    r.value("z", label(labels, cert.z));
    r.value("phi_z", c.instance().phi().get(cert.z));
    r.value("s_of_z", set(labels, &cert.s_of_z.members));
    r.value("j_value", &cert.s_of_z.j_value);
    r.section("checks", |s| {
        s.value("phi_constant_on_s", cert.checks.phi_constant_on_s);
        s.value("s_in_closures", cert.checks.s_in_closures);
        s.value("strict_outside", cert.checks.strict_outside);
    });
    push_t1_ekeland(&mut r, t1);
    r.value("certified", true);
    r
}

pub fn ekeland_report(
    c: &CompiledInstance,
    cert: &FullEkelandCertificate,
    t1: Option<&T1Ekeland>,
) -> Report {
    let labels = c.labels();
    let mut r = Report::new();
    r.value("principle", "ekeland");
    r.value("epsilon", &cert.epsilon);
    r.value("lambda", &cert.lambda);
    r.value("gamma", &cert.gamma);
    r.value("start", label(labels, cert.x0));
    r.value("start_cone", set(labels, &cert.x0_subspace));
    r.value("inner_moves", cert.inner_steps);
    r.value("z", label(labels, cert.z));
    r.value("phi_z", c.instance().phi().get(cert.z));
    r.section("clauses", |s| {
        s.value("improves_start", cert.clauses.improves_start);
        s.value("within_radius", cert.clauses.within_radius);
        s.value("phi_constant_on_s", cert.clauses.phi_constant_on_s);
        s.value("strict_outside", cert.clauses.strict_outside);
    });
    push_t1_ekeland(&mut r, t1);
    r.value("certified", true);
    r
}

fn push_t1_ekeland(r: &mut Report, t1: Option<&T1Ekeland>) {
    if let Some(t) = t1 {
        r.section("t1", |s| {
            s.value("s_singleton", t.s_singleton);
            s.value("strict_all", t.strict_all);
        });
    }
}

pub fn takahashi_report(
    c: &CompiledInstance,
    rep: &TakahashiReport,
    t1: Option<&T1Takahashi>,
) -> Report {
    let labels = c.labels();
    let mut r = Report::new();
    r.value("principle", "takahashi");
    r.value(
        "variant",
        match rep.variant {
            TakahashiVariant::StrictPhi => "strict-phi",
            TakahashiVariant::Closure => "closure",
        },
    );
    r.value("hypothesis_ok", rep.hypothesis_ok);
    r.value("violation", opt_label(labels, rep.violation));
    r.value("minimizer", opt_label(labels, rep.minimizer));
    r.value("attained_at", opt_label(labels, rep.attained_at));
    if let Some(t) = t1 {
        r.section("t1", |s| {
            s.value("hypothesis_ok", t.hypothesis_ok);
            s.value("violation", opt_label(labels, t.violation));
            s.value("minimizer", opt_label(labels, t.minimizer));
        });
    }
    r
}

pub fn caristi_report(
    c: &CompiledInstance,
    res: &CaristiResult,
    t1: Option<&T1Caristi>,
) -> Report {
    let labels = c.labels();
    let mut r = Report::new();
    r.value("principle", "caristi");
    r.value(
        "map_kind",
        match res.map_kind {
            MapKind::Single => "single",
            MapKind::Multi => "multi",
        },
    );
    r.value("feasible", res.feasible);
    r.value("z", opt_label(labels, res.z));
    r.value("tz", set(labels, &res.tz));
    r.value("witness", opt_label(labels, res.witness));
    r.section("conclusion", |s| {
        s.value("phi_equal", res.conclusion.phi_equal);
        s.value("in_closure", res.conclusion.in_closure);
    });
    if let Some(t) = t1 {
        r.section("t1", |s| s.value("fixed", t.fixed));
    }
    r.value("certified", true);
    r
}

pub fn fill_equivalence(r: &mut Report, labels: &[String], rep: &EquivalenceReport) {
    r.value("wek_holds", rep.wek_holds);
    r.value("wek_points", set(labels, &rep.wek_points));
    r.value("tak_negation", rep.tak_negation);
    r.value(
        "adversarial_map",
        match &rep.adversarial_t {
            None => "none".to_string(),
            Some(ps) => pairs(labels, ps),
        },
    );
    r.value("caristi_consistent", rep.caristi_consistent);
}

pub fn equivalence_report(labels: &[String], rep: &EquivalenceReport) -> Report {
    let mut r = Report::new();
    fill_equivalence(&mut r, labels, rep);
    r
}

pub fn witness_report(w: &WitnessSpace, rep: &WitnessReport) -> Report {
    let labels: Vec<String> = (1..=w.truncation()).map(|i| format!("x{i}")).collect();
    let mut r = Report::new();
    r.value("truncation", rep.truncation);
    r.value("forward_unit", rep.forward_unit);
    r.section("moduli", |s| {
        for row in &rep.moduli {
            s.section(row.eps.to_string(), |m| {
                m.value("least", row.least);
                m.value("bound", row.bound);
            });
        }
    });
    r.value("moduli_within_bound", rep.moduli_within_bound);
    r.value("left_least_at_half", rep.left_least_at_half);
    r.value("limit_candidates", set(&labels, &rep.limit_candidates));
    r.value("strict_successors", pairs(&labels, &rep.strict_successors));
    r.section("prefix_equivalence", |s| {
        fill_equivalence(s, &labels, &rep.prefix_equivalence)
    });
    r.value("conclusion", &rep.conclusion);
    r
}
