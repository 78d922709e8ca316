//! wasm-bindgen bindings for the demo page in `www/`.
//!
//! Every export takes and returns plain strings; errors come back as a
//! single `error: …` line so the page can print them as they are.

use steinberg_cli::Report;
use wasm_bindgen::prelude::*;

fn text(r: Report) -> String {
    if r.code == 0 {
        r.stdout
    } else {
        format!("{}{}", r.stdout, r.stderr)
    }
}

/// Decomposes a matrix file into `L=`, `D=`, `R=` and the torus parameters.
#[wasm_bindgen]
pub fn decompose(matrix_file: &str) -> String {
    text(steinberg_cli::decompose_cmd(matrix_file))
}

/// Spinor norm and double coset label, whichever apply to the group.
#[wasm_bindgen]
pub fn invariants(matrix_file: &str) -> String {
    let spinor = steinberg_cli::spinor_cmd(matrix_file);
    let coset = steinberg_cli::coset_cmd(matrix_file);
    let mut out = String::new();
    for r in [spinor, coset] {
        if r.code == 0 {
            out.push_str(&r.stdout);
        }
    }
    if out.is_empty() {
        return text(steinberg_cli::spinor_cmd(matrix_file));
    }
    out
}

/// A random member as a matrix file, ready to paste back into the editor.
#[wasm_bindgen]
pub fn random_member(header: &str, seed: u32, len: u32) -> String {
    match steinberg_cli::format::parse_header(header) {
        Ok(d) => text(steinberg_cli::random_cmd(&d, seed.into(), len as usize, true)),
        Err(e) => format!("error: {e}\n"),
    }
}
