//! Acceptance suite: one PASS/FAIL line per criterion, plus the word-length table.
//!
//! Run with `cargo test -p steinberg --test acceptance`.

use std::collections::{BTreeMap, HashSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinberg::coset::{coset_census, coset_label, is_in_parabolic, is_parabolic_token, omega, CosetLabel};
use steinberg::eliminate::word_length_bound;
use steinberg::generators::{all_tokens, derived_h, derived_w, unit_circle};
use steinberg::harness::{enumerate, random_member_with, random_nonzero, random_token, random_torus, Method, DEFAULT_CAP};
use steinberg::rowops::apply;
use steinberg::spinor::{in_commutator_subgroup, reflection, reflection_factorization, spinor_norm, wall_spinor_norm};
use steinberg::{decompose, Family, Field, GroupDescriptor, Matrix, Scalar, Side, SquareClass, Token, Word};

const FORM_FAMILIES: [Family; 4] = [Family::GSp, Family::GOEven, Family::GOOdd, Family::GOMinus];
const ORTHOGONAL: [Family; 3] = [Family::GOEven, Family::GOOdd, Family::GOMinus];

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn desc(fam: Family, l: usize, field: Field, sim: bool) -> GroupDescriptor {
    GroupDescriptor::new(fam, l, field, sim).unwrap()
}

fn fp(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn iso(fam: Family, l: usize, p: u64) -> GroupDescriptor {
    desc(fam, l, fp(p), false)
}

/// Mixed word lengths so both determinants occur even when every token is a reflection.
fn member(d: &GroupDescriptor, rng: &mut ChaCha8Rng) -> Matrix {
    let len = rng.gen_range(2 * d.n()..=4 * d.n());
    random_member_with(d, rng, len, true)
}

fn random_matrix(d: &GroupDescriptor, rng: &mut ChaCha8Rng) -> Matrix {
    let n = d.n();
    let rows = (0..n)
        .map(|_| (0..n).map(|_| d.field.from_i64(rng.gen_range(-6..=6))).collect())
        .collect();
    Matrix::from_rows(d.field, rows).unwrap()
}

#[derive(Default, Clone, Copy)]
struct OpStats {
    runs: usize,
    max: usize,
    total: usize,
}

fn round_trip(stats: &mut BTreeMap<(String, usize), OpStats>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut runs = 0;
    for fam in FORM_FAMILIES {
        for l in 1..=4 {
            let mut fields = vec![fp(3), fp(5), fp(7)];
            if fam != Family::GOMinus {
                fields.push(Field::Rationals);
            }
            for field in fields {
                for k in 0..200 {
                    let d = desc(fam, l, field, k % 2 == 1);
                    let g = member(&d, &mut rng);
                    let dec = decompose(&g, &d).map_err(|e| format!("{d}: {e}\n{g}"))?;
                    let back = dec.reassemble(&d).map_err(|e| format!("{d}: {e}"))?;
                    ensure!(back == g, "{d}: L·D·R differs from the input\n{g}");
                    let s = stats.entry((fam.to_string(), l)).or_default();
                    s.runs += 1;
                    s.max = s.max.max(dec.op_count);
                    s.total += dec.op_count;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} members reassembled exactly"))
}

fn table_vs_product() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    let families = [Family::GL, Family::GSp, Family::GOEven, Family::GOOdd, Family::GOMinus];
    for fam in families {
        let mut ds = Vec::new();
        for l in 1..=3 {
            ds.push(desc(fam, l, fp(7), true));
            ds.push(desc(fam, l, fp(5), true));
            if fam != Family::GOMinus {
                ds.push(desc(fam, l, Field::Rationals, true));
            }
        }
        for d in &ds {
            for _ in 0..50 {
                let t = random_nonzero(d.field, &mut rng);
                let g = random_matrix(d, &mut rng);
                let mut toks = all_tokens(d, &t);
                if fam == Family::GOMinus {
                    toks.extend(unit_circle(d));
                }
                toks.push(random_torus(d, &mut rng));
                for tok in toks {
                    let m = tok.matrix(d).map_err(|e| format!("{d} {tok}: {e}"))?;
                    let left = apply(&g, &tok, Side::Left, d).map_err(|e| e.to_string())?;
                    let right = apply(&g, &tok, Side::Right, d).map_err(|e| e.to_string())?;
                    ensure!(left == &m * &g, "{d}: row table of {tok} differs from the product");
                    ensure!(right == &g * &m, "{d}: column table of {tok} differs from the product");
                    checks += 2;
                }
            }
        }
    }
    Ok(format!("{checks} table applications match the product"))
}

/// `x_{a,b}(t)` written out with unit matrices.
fn explicit_x(d: &GroupDescriptor, a: i32, b: i32, t: &Scalar) -> Matrix {
    let id = d.identity();
    if a == -b {
        return id.add(&d.unit(a, b, t));
    }
    let sign = if d.family == Family::GSp { a.signum() * b.signum() } else { 1 };
    let second = d.unit(-b, -a, t).scale(&d.field.from_i64(-sign as i64));
    id.add(&d.unit(a, b, t)).add(&second)
}

fn product(ms: &[Matrix], d: &GroupDescriptor) -> Matrix {
    ms.iter().fold(d.identity(), |acc, m| &acc * m)
}

/// `I + Σ c·e_{a,b}`.
fn sparse(d: &GroupDescriptor, entries: &[(i32, i32, i64)]) -> Matrix {
    entries
        .iter()
        .fold(d.identity(), |acc, &(a, b, c)| acc.add(&d.unit(a, b, &d.field.from_i64(c))))
}

fn interchange_and_torus_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checks = 0;
    for field in [fp(3), fp(5), fp(7), Field::Rationals] {
        let one = field.one();
        let m1 = -field.one();
        for l in 1..=4usize {
            let li = l as i32;
            let sp = desc(Family::GSp, l, field, false);
            let go = desc(Family::GOEven, l, field, false);
            let odd = desc(Family::GOOdd, l, field, false);
            for i in 1..=li {
                let want = sparse(&sp, &[(i, -i, 1), (-i, i, -1), (i, i, -1), (-i, -i, -1)]);
                let ex = product(
                    &[explicit_x(&sp, i, -i, &one), explicit_x(&sp, -i, i, &m1), explicit_x(&sp, i, -i, &one)],
                    &sp,
                );
                let word = derived_w(i, &sp).unwrap().evaluate(&sp).unwrap();
                ensure!(ex == want && word == want, "symplectic w[{i},-{i}] in {sp}");

                let want = sparse(&go, &[(i, -i, -1), (-i, i, -1), (i, i, -1), (-i, -i, -1)]);
                let ex = if i == li {
                    want.clone()
                } else {
                    let w_l = sparse(&go, &[(li, -li, -1), (-li, li, -1), (li, li, -1), (-li, -li, -1)]);
                    let w_li = product(
                        &[explicit_x(&go, li, i, &one), explicit_x(&go, i, li, &m1), explicit_x(&go, li, i, &one)],
                        &go,
                    );
                    let w_lmi = product(
                        &[explicit_x(&go, li, -i, &one), explicit_x(&go, -li, i, &one), explicit_x(&go, li, -i, &one)],
                        &go,
                    );
                    product(&[w_l, w_li, w_lmi], &go)
                };
                let word = derived_w(i, &go).unwrap().evaluate(&go).unwrap();
                ensure!(ex == want && word == want, "orthogonal w[{i},-{i}] in {go}");

                let want = sparse(&odd, &[(0, 0, -2), (i, -i, -1), (-i, i, -1), (i, i, -1), (-i, -i, -1)]);
                let word = Word(vec![Token::x(0, i, m1.clone()), Token::x(i, 0, one.clone()), Token::x(0, i, m1.clone())]);
                ensure!(word.evaluate(&odd).unwrap() == want, "odd w[{i},-{i}] in {odd}");
                ensure!(derived_w(i, &odd).unwrap().evaluate(&odd).unwrap() == want, "odd derived w[{i}] in {odd}");
                checks += 3;
            }
            for _ in 0..20 {
                let lambda = random_nonzero(field, &mut rng);
                let w_t = |t: &Scalar| {
                    product(
                        &[
                            explicit_x(&sp, li, -li, t),
                            explicit_x(&sp, -li, li, &-t.inv().unwrap()),
                            explicit_x(&sp, li, -li, t),
                        ],
                        &sp,
                    )
                };
                let closed = d_plus(&sp, &[(li, -li, &lambda), (-li, li, &-lambda.inv().unwrap())], li);
                ensure!(w_t(&lambda) == closed, "w[{li},-{li}]({lambda}) in {sp}");
                let mut diag = vec![field.one(); sp.n()];
                diag[sp.pos(li)] = lambda.clone();
                diag[sp.pos(-li)] = lambda.inv().unwrap();
                let want = Matrix::diagonal(field, &diag);
                let h = &w_t(&lambda) * &w_t(&m1);
                let word = derived_h(&lambda, &sp).unwrap().evaluate(&sp).unwrap();
                ensure!(h == want && word == want, "h[{li}]({lambda}) in {sp}");
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} identities hold exactly"))
}

/// `I − e_{l,l} − e_{-l,-l} + Σ c·e_{a,b}`.
fn d_plus(d: &GroupDescriptor, entries: &[(i32, i32, &Scalar)], l: i32) -> Matrix {
    let base = sparse(d, &[(l, l, -1), (-l, -l, -1)]);
    entries.iter().fold(base, |acc, &(a, b, c)| acc.add(&d.unit(a, b, c)))
}

fn triple(g: &Matrix, d: &GroupDescriptor) -> Result<SquareClass, String> {
    let alg = spinor_norm(g, d).map_err(|e| format!("{d}: {e}\n{g}"))?;
    let wall = wall_spinor_norm(g, d).map_err(|e| format!("{d}: {e}\n{g}"))?;
    let refl = reflection_factorization(g, d).map_err(|e| format!("{d}: {e}\n{g}"))?;
    let mut prod = d.identity();
    for v in &refl.vectors {
        prod = &prod * &reflection(v, d).map_err(|e| e.to_string())?;
    }
    ensure!(&prod == g, "{d}: reflections do not multiply back\n{g}");
    ensure!(alg == wall && wall == refl.norm, "{d}: algorithmic {alg}, Wall {wall}, reflections {}\n{g}", refl.norm);
    Ok(alg)
}

fn spinor_agreement() -> Outcome {
    let mut count = 0;
    let mut sets = vec![
        enumerate(&iso(Family::GOEven, 1, 3), Method::BruteForce, DEFAULT_CAP),
        enumerate(&iso(Family::GOMinus, 1, 3), Method::BruteForce, DEFAULT_CAP),
        enumerate(&iso(Family::GOEven, 2, 3), Method::GeneratorClosure, DEFAULT_CAP),
    ];
    for e in sets.drain(..) {
        let e = e.map_err(|e| e.to_string())?;
        for g in &e.elements {
            triple(g, &e.descriptor)?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for d in [iso(Family::GOOdd, 2, 5), iso(Family::GOEven, 3, 5), iso(Family::GOMinus, 2, 5)] {
        for _ in 0..500 {
            triple(&member(&d, &mut rng), &d)?;
            count += 1;
        }
    }
    Ok(format!("{count} elements, all three norms agree"))
}

fn homomorphism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    for fam in ORTHOGONAL {
        for d in [iso(fam, 2, 5), iso(fam, 3, 7)] {
            let norms = |g: &Matrix| -> Result<(SquareClass, SquareClass), String> {
                let a = spinor_norm(g, &d).map_err(|e| format!("{d}: {e}"))?;
                let w = wall_spinor_norm(g, &d).map_err(|e| format!("{d}: {e}"))?;
                Ok((a, w))
            };
            for _ in 0..250 {
                let g = member(&d, &mut rng);
                let h = member(&d, &mut rng);
                let (ga, gw) = norms(&g)?;
                let (ha, hw) = norms(&h)?;
                let (pa, pw) = norms(&(&g * &h))?;
                ensure!(pa == ga.mul(&ha), "{d}: algorithmic norm is not multiplicative");
                ensure!(pw == gw.mul(&hw), "{d}: Wall norm is not multiplicative");

                let len = rng.gen_range(1..=3 * d.n());
                let mut w = Word::new();
                while w.len() < len {
                    let t = random_token(&d, &mut rng);
                    if t.kind(&d).map_err(|e| e.to_string())?.is_unipotent() {
                        w.push(t);
                    }
                }
                let u = w.evaluate(&d).map_err(|e| e.to_string())?;
                let (ua, uw) = norms(&u)?;
                ensure!(ua.is_square() && uw.is_square(), "{d}: unipotent word {w} has norm {ua}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} products and {count} unipotent words per check"))
}

fn word_length(stats: &BTreeMap<(String, usize), OpStats>) -> Outcome {
    ensure!(!stats.is_empty(), "no round-trip runs to read op counts from");
    let mut table = String::from("family   l  runs  max_ops  mean_ops  bound\n");
    let mut worst = Vec::new();
    for ((fam, l), s) in stats {
        let l = *l;
        let bound = word_length_bound(l);
        table.push_str(&format!(
            "{:<8} {l:>2} {:>5} {:>8} {:>9.1} {:>6}\n",
            fam,
            s.runs,
            s.max,
            s.total as f64 / s.runs as f64,
            bound
        ));
        if s.max > bound {
            worst.push(format!("{fam} l={l}: {} > {bound}", s.max));
        }
    }
    print!("{table}");
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("word_lengths.txt");
    std::fs::write(&path, &table).map_err(|e| e.to_string())?;
    ensure!(worst.is_empty(), "bound exceeded: {}", worst.join(", "));
    Ok(format!("every family within 40 l^3 + 60, table at {}", path.display()))
}

fn rank_oracle(g: &Matrix, d: &GroupDescriptor) -> usize {
    let rows: Vec<usize> = d.labels().iter().filter(|&&r| r <= 0).map(|&r| d.pos(r)).collect();
    let cols: Vec<usize> = (1..=d.l as i32).map(|c| d.pos(c)).collect();
    g.block(&rows, &cols).rank()
}

fn random_p(d: &GroupDescriptor, rng: &mut ChaCha8Rng) -> Matrix {
    let w: Word = (0..6)
        .map(|_| {
            let t = random_nonzero(d.field, rng);
            let toks: Vec<_> = all_tokens(d, &t).into_iter().filter(|x| is_parabolic_token(x, d)).collect();
            toks.choose(rng).unwrap().clone()
        })
        .collect();
    w.evaluate(d).unwrap()
}

fn witness_ok(g: &Matrix, d: &GroupDescriptor, lab: &CosetLabel) -> Result<(), String> {
    for t in lab.left_witness.tokens().iter().chain(lab.right_witness.tokens()) {
        ensure!(is_parabolic_token(t, d), "{d}: witness token {t} is outside P");
    }
    let l = lab.left_witness.evaluate(d).map_err(|e| e.to_string())?;
    let r = lab.right_witness.evaluate(d).map_err(|e| e.to_string())?;
    let p = &lab.omega.inverse().map_err(|e| e.to_string())? * &(&(&l * g) * &r);
    ensure!(is_in_parabolic(&p, d).map_err(|e| e.to_string())?, "{d}: witness does not land in omega P\n{g}");
    ensure!(lab.omega == omega(lab.m, d).map_err(|e| e.to_string())?, "{d}: wrong omega for m={}", lab.m);
    ensure!(lab.m == rank_oracle(g, d), "{d}: label {} disagrees with the rank oracle", lab.m);
    Ok(())
}

fn double_cosets() -> Outcome {
    let census = |d: GroupDescriptor, method: Method| -> Result<usize, String> {
        let e = enumerate(&d, method, DEFAULT_CAP).map_err(|e| e.to_string())?;
        for g in &e.elements {
            witness_ok(g, &d, &coset_label(g, &d).map_err(|e| e.to_string())?)?;
        }
        Ok(coset_census(&d, &e).map_err(|e| e.to_string())?.len())
    };
    let sp = census(iso(Family::GSp, 1, 3), Method::BruteForce)?;
    ensure!(sp == 2, "Sp(2,3) has {sp} labels");
    let o4 = census(iso(Family::GOEven, 2, 3), Method::GeneratorClosure)?;
    ensure!(o4 == 3, "closure of O+(4,3) has {o4} labels");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for d in [iso(Family::GSp, 2, 3), iso(Family::GOOdd, 2, 3)] {
        for _ in 0..10 {
            let g = member(&d, &mut rng);
            let lab = coset_label(&g, &d).map_err(|e| e.to_string())?;
            witness_ok(&g, &d, &lab)?;
            for _ in 0..100 {
                let h = &(&random_p(&d, &mut rng) * &g) * &random_p(&d, &mut rng);
                let lh = coset_label(&h, &d).map_err(|e| e.to_string())?;
                ensure!(lh.m == lab.m, "{d}: label moved from {} to {} under P×P", lab.m, lh.m);
                witness_ok(&h, &d, &lh)?;
                checks += 1;
            }
        }
    }
    Ok(format!("census 2 and 3 labels, {checks} P×P translates keep their label"))
}

fn generation() -> Outcome {
    let mut sizes = Vec::new();
    for fam in FORM_FAMILIES {
        let d = iso(fam, 1, 3);
        let brute = enumerate(&d, Method::BruteForce, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let closure = enumerate(&d, Method::GeneratorClosure, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let a: HashSet<_> = brute.elements.into_iter().collect();
        let b: HashSet<_> = closure.elements.into_iter().collect();
        ensure!(a == b, "{d}: brute force has {} elements, closure {}", a.len(), b.len());
        sizes.push(format!("{fam}={}", a.len()));
    }
    Ok(format!("closure equals brute force ({})", sizes.join(" ")))
}

fn commutators() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for fam in ORTHOGONAL {
        let ds = [iso(fam, 2, 5), iso(fam, 3, 7)];
        for k in 0..200 {
            let d = &ds[k % 2];
            let g = member(d, &mut rng);
            let h = member(d, &mut rng);
            let c = &(&(&g * &h) * &g.inverse().unwrap()) * &h.inverse().unwrap();
            let inside = in_commutator_subgroup(&c, d).map_err(|e| format!("{d}: {e}"))?;
            ensure!(inside, "{d}: commutator rejected\n{c}");
        }
        for k in 0..200 {
            let d = &ds[k % 2];
            let lambda = loop {
                let x = random_nonzero(d.field, &mut rng);
                if !x.square_class().unwrap().is_square() {
                    break x;
                }
            };
            let alpha = (fam == Family::GOOdd).then(|| d.field.one());
            let t = Token::torus(alpha, lambda, d.field.one()).matrix(d).map_err(|e| e.to_string())?;
            let inside = in_commutator_subgroup(&t, d).map_err(|e| format!("{d}: {e}"))?;
            ensure!(!inside, "{d}: non-square torus accepted\n{t}");
        }
    }
    Ok("600 commutators accepted, 600 non-square tori rejected".into())
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match res {
        Ok(detail) => {
            println!("PASS {name}: {detail} [{secs:.1}s]");
            true
        }
        Err(why) => {
            println!("FAIL {name}: {why} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let mut stats = BTreeMap::new();
    let results = [
        run("1 round-trip", || round_trip(&mut stats)),
        run("2 table vs product", table_vs_product),
        run("3 interchange and torus identities", interchange_and_torus_identities),
        run("4 spinor norm agreement", spinor_agreement),
        run("5 spinor norm homomorphism", homomorphism),
        run("6 word length", || word_length(&stats)),
        run("7 double cosets", double_cosets),
        run("8 generation", generation),
        run("9 commutator subgroup", commutators),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
