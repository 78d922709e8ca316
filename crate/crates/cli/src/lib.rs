//! Commands behind the `steinberg` binary.
//!
//! Each command takes file contents and returns the text to print together
//! with an exit code: 0 on success, 1 for usage and parse errors, 2 for
//! domain errors such as a matrix outside its group.

pub mod format;

use std::fmt::Write as _;

use steinberg::coset::{coset_census, coset_label};
use steinberg::eliminate::Terminal;
use steinberg::harness::{enumerate, random_member, Method};
use steinberg::spinor::spinor_norm;
use steinberg::{decompose, GroupDescriptor, Matrix, Word};

pub use format::{parse_matrix_file, write_matrix_file, MatrixFile, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, stderr: String::new(), code: 0 }
    }

    fn parse(err: impl std::fmt::Display) -> Self {
        Report { stdout: String::new(), stderr: format!("error: {err}\n"), code: 1 }
    }

    fn domain(err: impl std::fmt::Display) -> Self {
        Report { stdout: String::new(), stderr: format!("error: {err}\n"), code: 2 }
    }
}

macro_rules! parse_or_report {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Report::parse(err),
        }
    };
}

macro_rules! or_domain {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Report::domain(err),
        }
    };
}

pub fn decompose_cmd(matrix_text: &str) -> Report {
    let MatrixFile { descriptor: d, matrix: g } = parse_or_report!(parse_matrix_file(matrix_text));
    or_domain!(d.check_member(&g));
    let dec = or_domain!(decompose(&g, &d));
    let mut out = String::new();
    writeln!(out, "L={}", dec.left).unwrap();
    writeln!(out, "D={}", format::inline_matrix(&dec.diagonal)).unwrap();
    writeln!(out, "R={}", dec.right).unwrap();
    writeln!(out, "lambda={}", dec.lambda).unwrap();
    writeln!(out, "mu={}", dec.mu).unwrap();
    writeln!(out, "alpha={}", dec.alpha.map(|a| a.to_string()).unwrap_or_default()).unwrap();
    if let Terminal::TwistedReflection { t, s } = &dec.terminal {
        writeln!(out, "terminal=x1({t},{s})").unwrap();
    }
    writeln!(out, "ops={}", dec.op_count).unwrap();
    Report::ok(out)
}

/// A bare word, or `L=`/`D=`/`R=` lines as printed by `decompose`.
pub fn parse_product(d: &GroupDescriptor, text: &str) -> Result<Matrix, String> {
    let mut fields = [None, None, None];
    let mut bare = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        match line.split_once('=') {
            Some(("L", v)) => fields[0] = Some(v),
            Some(("D", v)) => fields[1] = Some(v),
            Some(("R", v)) => fields[2] = Some(v),
            Some(_) => {}
            None => bare.push(line),
        }
    }
    let word = |s: &str| -> Result<Matrix, String> {
        let w = Word::parse(s, d.field).map_err(|e| e.to_string())?;
        w.evaluate(d).map_err(|e| e.to_string())
    };
    if fields.iter().all(Option::is_none) {
        return word(&bare.join(" "));
    }
    let l = word(fields[0].unwrap_or(""))?;
    let dm = format::parse_inline_matrix(d, fields[1].unwrap_or("I")).map_err(|e| e.to_string())?;
    let r = word(fields[2].unwrap_or(""))?;
    Ok(&(&l * &dm) * &r)
}

/// `OK` when the word (or `L·D·R`) equals the matrix, otherwise `MISMATCH` with exit 2.
pub fn verify_cmd(word_text: &str, matrix_text: &str) -> Report {
    let MatrixFile { descriptor: d, matrix: g } = parse_or_report!(parse_matrix_file(matrix_text));
    let prod = parse_or_report!(parse_product(&d, word_text));
    if prod == g {
        Report::ok("OK\n".into())
    } else {
        Report { stdout: "MISMATCH\n".into(), stderr: String::new(), code: 2 }
    }
}

pub fn spinor_cmd(matrix_text: &str) -> Report {
    let MatrixFile { descriptor: d, matrix: g } = parse_or_report!(parse_matrix_file(matrix_text));
    let theta = or_domain!(spinor_norm(&g, &d));
    let dec = or_domain!(decompose(&g, &d.isometries()));
    Report::ok(format!("theta={theta}\nlambda={}\n", dec.lambda))
}

pub fn coset_cmd(matrix_text: &str) -> Report {
    let MatrixFile { descriptor: d, matrix: g } = parse_or_report!(parse_matrix_file(matrix_text));
    let lab = or_domain!(coset_label(&g, &d));
    Report::ok(format!("omega={}\nL={}\nR={}\n", lab.m, lab.left_witness, lab.right_witness))
}

pub fn random_cmd(d: &GroupDescriptor, seed: u64, len: usize, torus: bool) -> Report {
    let g = random_member(d, seed, len, torus);
    Report::ok(write_matrix_file(d, &g))
}

/// Brute force when `p^(n²)` fits under `cap`, generator closure otherwise.
pub fn census_cmd(d: &GroupDescriptor, cap: usize, method: Option<Method>) -> Report {
    let method = method.unwrap_or_else(|| {
        let small = d.field.order().and_then(|p| p.checked_pow((d.n() * d.n()) as u32)).is_some_and(|c| c <= cap as u64);
        if small {
            Method::BruteForce
        } else {
            Method::GeneratorClosure
        }
    });
    let e = or_domain!(enumerate(d, method, cap));
    let census = or_domain!(coset_census(d, &e));
    let mut out = String::new();
    for (m, count) in census {
        writeln!(out, "omega={m} count={count}").unwrap();
    }
    Report::ok(out)
}
