//! A worked example of paths in `K 1_1`, printed step by step.

use std::fmt::Write as _;

use kanforge::free::{formal_filling, make_free_fibration};
use kanforge::kan::sample_box;
use kanforge::path::{
    abstraction_to_normal_form, is_normal, is_prenormal, path_fibration, path_object,
    reflexivity_coalgebra, unbind,
};
use kanforge::sample::{self, GenConfig};
use kanforge::zsub::terminal_object;
use kanforge::{fresh_name, json, Bit, KTerm, Value, ZMorphism};

struct Transcript {
    out: String,
    ok: bool,
}

impl Transcript {
    fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", text.as_ref());
    }

    fn check(&mut self, what: &str, ok: bool) {
        self.ok &= ok;
        self.line(format!(
            "  check {what}: {}",
            if ok { "ok" } else { "FAILED" }
        ));
    }
}

/// The JSON of `v`, or a summary when it is long.
fn show(v: &Value) -> String {
    let text = json::to_string(v);
    if text.len() <= 160 {
        text
    } else {
        format!(
            "<term of rank {} with support {}, {} bytes of JSON>",
            v.rank(),
            v.support(),
            text.len()
        )
    }
}

pub fn path_demo(seed: u64) -> (String, bool) {
    let mut t = Transcript {
        out: String::new(),
        ok: true,
    };
    let cfg = GenConfig {
        names: 3,
        rank: 2,
        dims: 2,
    };
    let mut rng = sample::rng(seed);
    let fs = formal_filling(&make_free_fibration(&ZMorphism::identity(
        &terminal_object(),
    )));
    let po = path_object(&fs);
    let (r, c, kr) = reflexivity_coalgebra(&po);
    t.line(format!(
        "fibration: {} with filling {}",
        fs.morphism.label(),
        fs.filling.label()
    ));

    let mut x = fs.morphism.source().sample(&mut rng, &cfg, cfg.rank);
    for _ in 0..64 {
        if !x.support().is_empty() {
            break;
        }
        x = fs.morphism.source().sample(&mut rng, &cfg, cfg.rank);
    }
    let a = sample::pick(&mut rng, x.support()).unwrap_or_else(|| fresh_name(x.support()));
    t.line(format!("x = {}", show(&x)));
    t.line(format!("abstracting x over {a}"));

    let w = match abstraction_to_normal_form(&fs, &Value::abs(a, x.clone())) {
        Ok(w) => w,
        Err(e) => {
            t.line(format!("  error: {e}"));
            t.ok = false;
            return (t.out, t.ok);
        }
    };
    t.line(format!("w = {}", show(&w)));
    t.check(
        "w is a normal form",
        is_normal(&w) && po.object.contains(&w),
    );
    let ends = po.projection.apply(&w);
    let (x0, x1) = ends.as_pair().expect("a pair of endpoints");
    t.check("w starts at x(a:=0)", *x0 == x.subst(a, Bit::Zero));
    t.check("w ends at x(a:=1)", *x1 == x.subst(a, Bit::One));

    let b = fresh_name(&w.support().union(x.support()));
    t.line(format!("unbinding w along fresh {b}"));
    match unbind(&w, b) {
        Ok(z) => {
            t.line(format!("z = {}", show(&z)));
            t.check("z is pre-normal in the fresh name", is_prenormal(&z, b));
            t.check("z(b:=1) = w", z.subst(b, Bit::One) == w);
        }
        Err(e) => t.check(&format!("unbind ({e})"), false),
    }

    t.line("counit: rho(c(w)) = w");
    let cw = c.apply(&w);
    let back = kr.rho.apply(&cw);
    t.line(format!("  c(w) = {}", show(&cw)));
    t.line(format!("  rho(c(w)) = {}", show(&back)));
    t.check("counit", back == w);
    t.check("c(w) lies in K r", kr.object.contains(&cw));

    let rx = r.apply(&x);
    t.line(format!("r(x) = {}", show(&rx)));
    t.check("c(r(x)) has rank 0", c.apply(&rx).rank() == 0);
    let reflexive = matches!(w.as_term(), Some(KTerm::Base(_)));
    t.check(
        "c(w) has rank 0 exactly when w is reflexive",
        (c.apply(&w).rank() == 0) == reflexive,
    );

    let pf = path_fibration(&po);
    let bx = sample_box(&pf.morphism, &mut rng, &cfg, cfg.rank);
    let fill = pf.fill(&bx);
    t.line(format!(
        "filling a {} box of paths open at {} with {} faces",
        bx.kind(),
        bx.dir(),
        bx.faces().len()
    ));
    t.line(format!("  filler = {}", show(&fill)));
    t.check("filler is a path", po.object.contains(&fill));
    let faces_ok = bx
        .faces()
        .iter()
        .all(|(&(n, i), face)| fill.subst(n, i) == *face);
    t.check("filler restricts to every face", faces_ok);
    t.check(
        "filler lies over the base",
        po.projection.apply(&fill) == *bx.base(),
    );

    t.line(if t.ok {
        "all checks passed"
    } else {
        "some checks FAILED"
    });
    (t.out, t.ok)
}
