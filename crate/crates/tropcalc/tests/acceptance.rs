//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic, with
//! the wall time against its budget on a single worker thread.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use tropcalc::cli::io::{Document, Object};
use tropcalc::cli::suites::{self, Instance, Suite};
use tropcalc::deltaforms::{
    boundary1, boundary2, check_balanced, corner_locus, iterated_corner_locus, tropical_pl_check, DeltaForm,
    PsFunction,
};
use tropcalc::integration::{degree, green_sides, integrate_cell, stokes_sides, volume_form};
use tropcalc::linalg::rat::{q, Rat};
use tropcalc::morphisms::{
    divisor_compatibility_sides, graph_cycle, graph_direct, pullback, pushforward_hat,
};
use tropcalc::polyhedra::{AffineForm, Polyhedron};
use tropcalc::products::{diagonal_wedge, transversal_wedge, ProductError};
use tropcalc::random::{Sampler, SizeSpec};
use tropcalc::superforms::{Poly, Superform};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(a: &DeltaForm, b: &DeltaForm) -> bool {
    a.equal(b).unwrap_or(false)
}

fn form(a: &[i64], c: i64) -> AffineForm {
    AffineForm::new(a.iter().map(|&x| q(x)).collect(), q(c))
}

fn ray(dir: &[i64]) -> Polyhedron {
    let (a, b) = (q(dir[0]), q(dir[1]));
    Polyhedron::new(2, vec![(vec![-a.clone(), -b.clone()], q(0))], vec![(vec![b, -a], q(0))]).unwrap()
}

fn standard_line() -> DeltaForm {
    DeltaForm::from_weights(2, 1, vec![(ray(&[-1, 0]), q(1)), (ray(&[0, -1]), q(1)), (ray(&[1, 1]), q(1))]).unwrap()
}

fn origin(r: usize, w: i64) -> DeltaForm {
    DeltaForm::from_weights(r, r, vec![(Polyhedron::point(&vec![q(0); r]), q(w))]).unwrap()
}

fn sampler(seed: u64) -> Sampler {
    Sampler::new(seed, SizeSpec::default())
}

fn run_instances(label: &str, instances: &[Instance]) -> Result<usize, String> {
    for (i, res) in suites::run_all(instances).into_iter().enumerate() {
        match res {
            Ok(o) if o.pass => {}
            Ok(_) => return Err(format!("{label} instance {i}: sides differ")),
            Err(e) => return Err(format!("{label} instance {i}: {e}")),
        }
    }
    Ok(instances.len())
}

/// Redraws until the form has at most `size.max_cells` cells.
fn within_size(
    s: &mut Sampler,
    mut draw: impl FnMut(&mut Sampler) -> Result<DeltaForm, tropcalc::deltaforms::DeltaError>,
) -> Result<DeltaForm, String> {
    loop {
        let a = draw(s).map_err(|e| e.to_string())?;
        if a.cells().len() <= s.size.max_cells {
            return Ok(a);
        }
    }
}

// 1. Balancing agrees with the current-pairing test.
fn balancing_vs_currents() -> Outcome {
    let mut s = sampler(101);
    let (mut balanced, mut unbalanced) = (0, 0);
    for i in 0..200 {
        let alpha = within_size(&mut s, |s| {
            let r = s.rank();
            if i % 2 == 0 {
                let codim = s.rng().gen_range(0..r);
                s.balanced_form(r, codim, 1)
            } else {
                // forms whose balancing is not vacuous: nonzero with p below the cell dimension
                loop {
                    let codim = if r == 1 { 0 } else { s.rng().gen_range(1..r) };
                    let a = s.perturbed_form(r, codim, 1)?;
                    if !a.is_zero() && a.form_type().0 < a.cell_dim() {
                        break Ok(a);
                    }
                }
            }
        })?;
        let d = alpha.cells().iter().map(|(_, c)| c.max_degree()).max().unwrap_or(0);
        let engine = check_balanced(&alpha).balanced;
        let oracle = common::d1_current_is_polyhedral(&alpha, d);
        ensure(engine == oracle, || format!("form {i}: check_balanced = {engine}, current test = {oracle}"))?;
        if engine {
            balanced += 1;
        } else {
            unbalanced += 1;
        }
    }
    Ok(format!("200/200 agree ({balanced} balanced, {unbalanced} not)"))
}

// 2. Tropical Poincaré–Lelong.
fn poincare_lelong() -> Outcome {
    let mut s = sampler(202);
    for i in 0..100 {
        let r = s.rank();
        let codim = s.rng().gen_range(0..r);
        let alpha = s.tropical_cycle(r, codim, 2).map_err(|e| e.to_string())?;
        let phi = s.ps_function(r, 3);
        let ok = tropical_pl_check(&phi, &alpha).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(ok, || format!("pair {i}: sides differ"))?;
    }
    Ok("100/100 pairs".into())
}

fn tropical_curve(s: &mut Sampler, d: u32) -> DeltaForm {
    let f = PsFunction::max_of(&s.tropical_polynomial(2, d)).expect("integral forms");
    corner_locus(&f, &DeltaForm::full_space(2)).expect("balanced")
}

// 3. Stable intersection.
fn stable_intersection() -> Outcome {
    let l = standard_line();
    let ll = diagonal_wedge(&l, &l).map_err(|e| e.to_string())?;
    ensure(same(&ll, &origin(2, 1)), || "L ∧ L is not the weight-1 origin".into())?;

    let mut s = sampler(303);
    let mut bezout = 0;
    for d in 1..=3u32 {
        for e in 1..=3u32 {
            for _ in 0..2 {
                let (c, k) = (tropical_curve(&mut s, d), tropical_curve(&mut s, e));
                let w = diagonal_wedge(&c, &k).map_err(|x| x.to_string())?;
                let deg = degree(&w).map_err(|x| x.to_string())?;
                ensure(deg == q((d * e) as i64), || format!("deg(C_{d} ∧ C_{e}) = {deg}"))?;
                bezout += 1;
            }
        }
    }

    let mut assoc = Vec::new();
    let mut comm = Vec::new();
    while assoc.len() < 50 || comm.len() < 50 {
        for inst in suites::random_instances(Suite::Assoc, &mut s, 1) {
            match inst {
                Instance::Assoc { .. } if assoc.len() < 50 => assoc.push(inst),
                Instance::Comm { .. } if comm.len() < 50 => comm.push(inst),
                _ => {}
            }
        }
    }
    run_instances("associativity", &assoc)?;
    run_instances("commutativity", &comm)?;

    let mut transversal = 0;
    while transversal < 50 {
        let r = s.rng().gen_range(2..=3);
        let ca = s.rng().gen_range(1..r);
        let cb = s.rng().gen_range(1..=r - ca);
        let alpha = s.balanced_form(r, ca, 1).map_err(|e| e.to_string())?;
        let beta = s.tropical_cycle(r, cb, 2).map_err(|e| e.to_string())?;
        let v: Vec<Rat> = (0..r).map(|_| Rat::frac(s.int(-40, 40), 7)).collect();
        let beta = beta.translate(&v);
        match transversal_wedge(&alpha, &beta) {
            Ok(t) => {
                let w = diagonal_wedge(&alpha, &beta).map_err(|e| e.to_string())?;
                ensure(same(&t, &w), || format!("transversal instance {transversal}: products differ"))?;
                transversal += 1;
            }
            Err(ProductError::NotTransversal { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("L∧L, {bezout} Bézout pairs, 50 assoc, 50 comm, {transversal} transversal"))
}

// 4. Corner-locus fixtures and laws.
fn corner_loci() -> Outcome {
    let full1 = DeltaForm::full_space(1);
    let max_x0 = PsFunction::max_of(&[form(&[1], 0), form(&[0], 0)]).unwrap();
    let got = corner_locus(&max_x0, &full1).map_err(|e| e.to_string())?;
    ensure(same(&got, &origin(1, 1)), || "div(max{x,0}) ≠ [{0}]".into())?;

    let affine = PsFunction::max_of(&[form(&[3, -2], 5)]).unwrap();
    let got = corner_locus(&affine, &DeltaForm::full_space(2)).map_err(|e| e.to_string())?;
    ensure(got.is_zero(), || "affine φ has a nonzero corner locus".into())?;

    let min_x0 = PsFunction::min_of(&[form(&[1], 0), form(&[0], 0)]).unwrap();
    let got = corner_locus(&min_x0, &full1).map_err(|e| e.to_string())?;
    ensure(same(&got, &origin(1, 1).neg()), || "div(min{x,0}) ≠ −[{0}]".into())?;

    let line_phi = PsFunction::max_of(&[form(&[1, 0], 0), form(&[0, 1], 0), form(&[0, 0], 0)]).unwrap();
    let got = corner_locus(&line_phi, &DeltaForm::full_space(2)).map_err(|e| e.to_string())?;
    ensure(same(&got, &standard_line()), || "div(max{x,y,0}) is not the standard line".into())?;

    let mut s = sampler(404);
    for i in 0..50 {
        let r = s.rng().gen_range(2..=3);
        let codim = s.rng().gen_range(0..r - 1);
        let alpha = s.balanced_form(r, codim, 1).map_err(|e| e.to_string())?;
        let (f, g) = (s.pl_function(r, 2), s.pl_function(r, 3));
        let fg = iterated_corner_locus(&[f.clone(), g.clone()], &alpha).map_err(|e| e.to_string())?;
        let gf = iterated_corner_locus(&[g, f.clone()], &alpha).map_err(|e| e.to_string())?;
        ensure(same(&fg, &gf), || format!("instance {i}: div(f)div(g) ≠ div(g)div(f)"))?;

        let beta = s.tropical_cycle(r, 1, 1).map_err(|e| e.to_string())?;
        let left = corner_locus(&f, &diagonal_wedge(&alpha, &beta).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let right = diagonal_wedge(&corner_locus(&f, &alpha).map_err(|e| e.to_string())?, &beta)
            .map_err(|e| e.to_string())?;
        ensure(same(&left, &right), || format!("instance {i}: div(f)·(α∧β) ≠ (div(f)·α)∧β"))?;
    }
    Ok("4 fixtures, 50 commutativity + 50 associativity".into())
}

// 5. Morphisms.
fn morphisms() -> Outcome {
    let mut s = sampler(505);
    for i in 0..20 {
        let (a, b) = (s.rank(), s.rank());
        let f = s.affine_map(a, b);
        let g = graph_cycle(&f).map_err(|e| format!("graph {i}: {e}"))?;
        ensure(same(&g, &graph_direct(&f)), || format!("graph {i}: constructions differ"))?;
    }
    for i in 0..20 {
        let (a, b, c) = (s.rank(), s.rank(), s.rank());
        let f = s.affine_map(a, b);
        let g = s.affine_map(b, c);
        let codim = s.rng().gen_range(0..c);
        let alpha = s.tropical_cycle(c, codim, 1).map_err(|e| e.to_string())?;
        let gf = g.compose(&f).map_err(|e| e.to_string())?;
        let direct = pullback(&gf, &alpha).map_err(|e| format!("pair {i}: {e}"))?;
        let staged = pullback(&f, &pullback(&g, &alpha).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(same(&direct, &staged), || format!("pair {i}: (G∘F)* ≠ F*G*"))?;
    }
    run_instances("projection formula", &suites::random_instances(Suite::Projection, &mut s, 50))?;
    for i in 0..20 {
        let a = s.rank();
        let b = s.rng().gen_range(a..=3);
        let f = s.injective_map(a, b);
        let codim = s.rng().gen_range(0..a);
        let alpha = s.balanced_form(a, codim, 1).map_err(|e| e.to_string())?;
        let phi = s.ps_function(b, 2);
        let (l, r) = divisor_compatibility_sides(&f, &phi, &alpha).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(same(&l, &r), || format!("divisor compatibility {i}: sides differ"))?;
    }
    for i in 0..20 {
        let (a, b) = (s.rank(), s.rank());
        let f = s.affine_map(a, b);
        let points: Vec<(Polyhedron, Rat)> = (0..s.rng().gen_range(1..=4))
            .map(|_| {
                let x: Vec<Rat> = (0..a).map(|_| s.small_rat()).collect();
                (Polyhedron::point(&x), Rat::from(s.int(-3, 5)))
            })
            .collect();
        let z = DeltaForm::from_weights(a, a, points).map_err(|e| e.to_string())?;
        let pushed = pushforward_hat(&f, &z).map_err(|e| e.to_string())?;
        let (d0, d1) = (degree(&z).map_err(|e| e.to_string())?, degree(&pushed).map_err(|e| e.to_string())?);
        ensure(d0 == d1, || format!("0-cycle {i}: degree {d0} ↦ {d1}"))?;
    }
    Ok("20 graphs, 20 functoriality, 50 projection, 20 divisor, 20 degree".into())
}

// 6. Stokes and Green.
fn stokes_green() -> Outcome {
    let unit = DeltaForm::from_weights(1, 0, vec![(Polyhedron::cube(&[q(0)], &[q(1)]).unwrap(), q(1))]).unwrap();
    let x = Poly::var(1, 0);
    let eta = Superform::term(x.clone(), &[], &[0]).unwrap();
    let sides = stokes_sides(&unit, &eta).map_err(|e| e.to_string())?;
    ensure(sides == (q(1), q(1)), || format!("Stokes fixture gave {sides:?}"))?;
    let f = Superform::function(Poly::monomial(vec![3], q(1)));
    let g = Superform::function(&Poly::monomial(vec![2], q(2)) - &Poly::constant(1, Rat::frac(1, 3)));
    let sides = green_sides(&unit, &f, &g).map_err(|e| e.to_string())?;
    ensure(sides == (q(-1), q(-1)), || format!("Green fixture gave {sides:?}"))?;
    let square = Polyhedron::cube(&[q(0), q(0)], &[q(1), q(1)]).unwrap();
    let dd = |i: usize| Superform::d1x(2, i).w(&Superform::d2x(2, i));
    let alpha = dd(0).w(&dd(1));
    ensure(alpha == volume_form(2, &[0, 1]), || "volume form mismatch".into())?;
    let vol = integrate_cell(&square, &alpha).map_err(|e| e.to_string())?;
    ensure(vol == q(1), || format!("∫ d′x₁∧d″x₁∧d′x₂∧d″x₂ over the square = {vol}"))?;

    let mut s = Sampler::new(606, SizeSpec { max_rank: 3, max_cells: 12, max_degree: 4 });
    run_instances("stokes", &suites::random_instances(Suite::Stokes, &mut s, 100))?;
    run_instances("green", &suites::random_instances(Suite::Green, &mut s, 100))?;
    Ok("2 fixtures, 100 Stokes, 100 Green".into())
}

// 7. Derivative algebra.
fn derivative_algebra() -> Outcome {
    let mut s = sampler(707);
    let mut nonzero_boundary = 0;
    for i in 0..100 {
        let r = s.rank();
        let codim = s.rng().gen_range(0..r);
        let a = s.balanced_form(r, codim, 1).map_err(|e| e.to_string())?;
        let e = |x: tropcalc::deltaforms::DeltaError| format!("form {i}: {x}");
        let zero = |x: &DeltaForm| x.is_zero();
        let sum = |x: DeltaForm, y: DeltaForm| x.add(&y).map_err(e);
        ensure(zero(&a.dp1().dp1()) && zero(&a.dp2().dp2()), || format!("form {i}: dP² ≠ 0"))?;
        ensure(zero(&sum(a.dp1().dp2(), a.dp2().dp1())?), || format!("form {i}: dP1dP2 + dP2dP1 ≠ 0"))?;
        let (b1, b2) = (boundary1(&a).map_err(e)?, boundary2(&a).map_err(e)?);
        if !b1.is_zero() {
            nonzero_boundary += 1;
        }
        ensure(zero(&boundary1(&b1).map_err(e)?), || format!("form {i}: ∂′² ≠ 0"))?;
        ensure(zero(&boundary2(&b2).map_err(e)?), || format!("form {i}: ∂″² ≠ 0"))?;
        ensure(zero(&sum(boundary2(&b1).map_err(e)?, boundary1(&b2).map_err(e)?)?), || format!("form {i}: ∂′∂″ + ∂″∂′ ≠ 0"))?;
        ensure(zero(&sum(boundary1(&a.dp1()).map_err(e)?, b1.dp1())?), || format!("form {i}: ∂′dP1 + dP1∂′ ≠ 0"))?;
        let four = sum(
            sum(boundary1(&a.dp2()).map_err(e)?, b2.dp1())?,
            sum(boundary2(&a.dp1()).map_err(e)?, b1.dp2())?,
        )?;
        ensure(zero(&four), || format!("form {i}: ∂′dP2 + dP1∂″ + ∂″dP1 + dP2∂′ ≠ 0"))?;
    }
    Ok(format!("100/100 forms ({nonzero_boundary} with ∂′ ≠ 0)"))
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn roundtrip(doc: &Document) -> Result<(), String> {
    let text = doc.to_text();
    let back = Document::parse(&text).map_err(|e| e.to_string())?;
    ensure(back.to_text() == text, || "serialization is not idempotent".into())?;
    for (name, obj) in &doc.objects {
        let other = back.objects.get(name).ok_or_else(|| format!("{name} lost"))?;
        ensure(obj.same_as(other), || format!("{name} changed in the round trip"))?;
    }
    Ok(())
}

fn tropcalc(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tropcalc")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

// 8. CLI round trip and determinism.
fn cli_roundtrip() -> Outcome {
    let mut files = 0;
    for entry in std::fs::read_dir(fixture_dir()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let doc = Document::parse(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        roundtrip(&doc).map_err(|e| format!("{}: {e}", path.display()))?;
        files += 1;
    }
    let mut s = sampler(808);
    let mut doc = Document::default();
    for i in 0..10 {
        let r = s.rank();
        let codim = s.rng().gen_range(0..r);
        doc.objects.insert(format!("alpha{i}"), Object::DeltaForm(s.balanced_form(r, codim, 2).map_err(|e| e.to_string())?));
        doc.objects.insert(format!("phi{i}"), Object::PsFunction(s.ps_function(r, 3)));
        doc.objects.insert(format!("eta{i}"), Object::Superform(s.superform(r, 1, 1, 3)));
        let t = s.rank();
        doc.objects.insert(format!("map{i}"), Object::AffineMap(s.affine_map(r, t)));
        doc.objects.insert(format!("poly{i}"), Object::Polyhedron(s.polytope(r, r)));
    }
    roundtrip(&doc)?;

    let dir = std::env::temp_dir().join(format!("tropcalc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut runs = 0;
    for suite in ["stokes", "green", "pl", "projection", "assoc"] {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let dump = dir.join(format!("{suite}-{k}.json"));
            let (code, stdout) = tropcalc(&[
                "verify", "--random", "--suite", suite, "--seed", "4242", "--count", "8", "--dump", dump.to_str().unwrap(),
            ])?;
            ensure(code == 0, || format!("verify --suite {suite} exited {code}"))?;
            outputs.push(stdout);
        }
        ensure(outputs[0] == outputs[1], || format!("verify --suite {suite}: outputs differ between runs"))?;
        runs += 2;
    }
    let line = fixture_dir().join("line.json");
    let mut outs = Vec::new();
    for k in 0..2 {
        let out = dir.join(format!("compute-{k}.json"));
        let (code, _) = tropcalc(&["compute", line.to_str().unwrap(), "wedge(L, corner(phi, fullspace))", "-o", out.to_str().unwrap()])?;
        ensure(code == 0, || format!("compute exited {code}"))?;
        outs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outs[0] == outs[1], || "compute outputs differ between runs".into())?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{files} fixture files + 50 random objects round-trip, {runs} seeded runs byte-identical"))
}

fn main() {
    rayon::ThreadPoolBuilder::new().num_threads(1).build_global().expect("fresh pool");
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("balancing ⇔ δ-form current test", 120, balancing_vs_currents),
        ("tropical Poincaré–Lelong", 120, poincare_lelong),
        ("stable intersection", 300, stable_intersection),
        ("corner-locus fixtures and laws", 60, corner_loci),
        ("morphisms", 300, morphisms),
        ("Stokes and Green", 120, stokes_green),
        ("derivative algebra", 120, derivative_algebra),
        ("CLI round trip and determinism", 30, cli_roundtrip),
    ];
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, (name, budget, check)) in criteria.iter().enumerate() {
        if filter.is_some_and(|f| f != n + 1) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the time budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {status}  {name}: {detail}  [{:.1}s / {budget}s]", n + 1, took.as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
