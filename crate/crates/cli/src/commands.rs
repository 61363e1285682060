//! One function per subcommand, each returning the JSON result.

use qpencil::autos::{aut_x, automorphism_group, reflections};
use qpencil::exec::Exec;
use qpencil::geometry::{canonical_plane, enumerate_generators, splitting_degree};
use qpencil::invariants::{arf_invariant, is_isomorphic, r_invariant_of};
use qpencil::lattice::{build_lattice, intersection_matrix};
use qpencil::normalform::extract_normal_form;
use qpencil::verify::{self, working_extension, Scale};
use qpencil::{Embedding, Error, Matrix, Pencil};
use serde_json::{json, Value};

use crate::doc::{elements, FieldSpec};

type Result<T> = std::result::Result<T, Error>;

fn matrix(m: &Matrix) -> Vec<Vec<u64>> {
    m.to_rows().iter().map(|r| elements(r)).collect()
}

fn vectors(v: &[Vec<qpencil::Fe>]) -> Vec<Vec<u64>> {
    v.iter().map(|x| elements(x)).collect()
}

fn field_json(f: qpencil::Gf) -> Value {
    serde_json::to_value(FieldSpec::of(f)).expect("plain struct")
}

/// The extension of degree `ext` over the base field, or `default` when absent.
fn extension(p: &Pencil, ext: Option<u32>, default: impl FnOnce() -> Result<u32>) -> Result<Embedding> {
    let j = match ext {
        Some(j) => j,
        None => default()?,
    };
    if j == 0 {
        return Err(Error::InvalidInput("extension degree must be positive".into()));
    }
    Ok(p.field().extension(j)?.1)
}

pub fn halfdisc(p: &Pencil) -> Result<Value> {
    let delta = p.half_discriminant();
    Ok(json!({ "degree": delta.degree(), "coefficients": elements(delta.coeffs()) }))
}

pub fn regular(p: &Pencil) -> Result<Value> {
    Ok(json!({ "regular": p.is_regular() }))
}

pub fn normalform(p: &Pencil) -> Result<Value> {
    let nf = extract_normal_form(p)?;
    Ok(json!({
        "m": nf.m(),
        "a": elements(&nf.a),
        "r": elements(&nf.r),
        "basis": matrix(&nf.basis.matrix(p.field())),
    }))
}

pub fn rinv(p: &Pencil) -> Result<Value> {
    let (q, g) = p.ensure_an_nonzero()?;
    let (nf, r) = r_invariant_of(&q)?;
    Ok(json!({
        "rebasing": matrix(&g),
        "a": elements(&nf.a),
        "r": elements(&nf.r),
        "value": elements(r.value.coeffs()),
        "class": elements(r.class().coeffs()),
        "trivial": r.is_trivial(),
    }))
}

pub fn isiso(p1: &Pencil, p2: &Pencil) -> Result<Value> {
    let res = is_isomorphic(p1, p2)?;
    Ok(json!({ "isomorphic": res.isomorphic, "witness": res.witness.as_ref().map(matrix) }))
}

pub fn autos(p: &Pencil, ext: Option<u32>) -> Result<Value> {
    let mut out = json!({});
    if ext.is_none() || ext == Some(1) {
        let group = automorphism_group(p)?;
        let mats: Vec<_> = group.iter().map(|a| matrix(&a.matrix)).collect();
        out["pair"] = json!({ "order": mats.len(), "matrices": mats });
    }
    if let Some(j) = ext {
        let e = extension(p, Some(j), || unreachable!())?;
        let ax = aut_x(p, &e)?;
        out["field"] = field_json(ax.field);
        out["variety"] = json!({
            "order": ax.order(),
            "pair_order": ax.pair_automorphisms.len(),
            "line_order": ax.line_automorphisms.len(),
            "elements": ax.elements.iter().map(matrix).collect::<Vec<_>>(),
        });
    }
    Ok(out)
}

pub fn reflections_cmd(p: &Pencil, ext: Option<u32>) -> Result<Value> {
    let e = extension(p, ext, || splitting_degree(&p.half_discriminant()))?;
    let refl = reflections(p, &e)?;
    let items: Vec<Value> = refl
        .iter()
        .map(|r| {
            json!({
                "root": [r.root.0 .0, r.root.1 .0],
                "z": elements(&r.z),
                "matrix": matrix(&r.matrix),
                "matches_idempotent": r.idempotent_matrix.as_ref().map(|g| *g == r.matrix),
            })
        })
        .collect();
    Ok(json!({ "field": field_json(e.target()), "reflections": items }))
}

pub fn generators(p: &Pencil, ext: Option<u32>) -> Result<Value> {
    let e = extension(p, ext, || working_extension(p))?;
    let gens = enumerate_generators(p, &e)?;
    let all: Vec<_> = gens.all.iter().map(|s| vectors(&s.key)).collect();
    Ok(json!({
        "field": field_json(gens.field),
        "count": all.len(),
        "base": vectors(&gens.base.key),
        "generators": all,
    }))
}

pub fn canonical_plane_cmd(p: &Pencil) -> Result<Value> {
    let plane = canonical_plane(p)?;
    Ok(json!({ "l0": elements(&plane.l0), "l1": elements(&plane.l1), "basis": vectors(&plane.basis) }))
}

pub fn arf(p: &Pencil) -> Result<Value> {
    let (q, g) = p.ensure_an_nonzero()?;
    let nf = extract_normal_form(&q)?;
    let data = arf_invariant(&nf)?;
    Ok(json!({
        "rebasing": matrix(&g),
        "arf": elements(data.arf.coeffs()),
        "class": elements(data.arf_class.coeffs()),
        "matches_r": data.matches_r,
    }))
}

pub fn lattice(p: &Pencil, ext: Option<u32>) -> Result<Value> {
    let e = extension(p, ext, || working_extension(p))?;
    let (gens, lat) = build_lattice(p, &e)?;
    let lines = intersection_matrix(&gens.all, gens.field, lat.m)?;
    Ok(json!({
        "field": field_json(gens.field),
        "m": lat.m,
        "rank": lat.rank,
        "symbol_gram": lat.symbol_gram,
        "e_basis": lat.e_basis,
        "gram": lat.gram,
        "gram_det": lat.gram_det,
        "eta_in_e": lat.eta_in_e,
        "root_basis": lat.root_basis,
        "root_gram": lat.root_gram,
        "signed_cartan": lat.is_signed_cartan(),
        "generator_intersections": lines,
    }))
}

pub fn verify_cmd(scale: Scale, exec: Exec) -> Value {
    let results = verify::run_all(scale, exec);
    let items: Vec<Value> = results
        .iter()
        .map(|c| json!({ "tag": c.tag, "name": c.name, "checked": c.checked, "passed": c.passed, "detail": c.detail }))
        .collect();
    json!({
        "scale": match scale { Scale::Small => "small", Scale::Full => "full" },
        "passed": results.iter().all(|c| c.passed),
        "results": items,
    })
}
