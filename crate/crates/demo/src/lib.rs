//! Browser bindings: the complex and bunch of a parameter, chamber counts at
//! a ray, and labelled 2D slices of the chamber structure for `n = 5`.

use std::collections::HashMap;

use hyperpolygon::arrangements::{build_a, count_chambers_at_ray, Method};
use hyperpolygon::bunches::phi_from_complex;
use hyperpolygon::complexes::{is_full, Subset};
use hyperpolygon::ratgeom::{parse_rational, RatVector};
use wasm_bindgen::prelude::*;

pub const SLICE_N: usize = 5;

fn parse_vector(text: &str) -> Result<RatVector, String> {
    let v = text
        .split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatVector(v))
}

/// JSON with the complex of `θ`, its bunch of free cones, and whether it is full.
pub fn complex_json(theta: &str) -> Result<String, String> {
    let theta = parse_vector(theta)?;
    let c = hyperpolygon::bunches::complex_from_theta(&theta).map_err(|e| e.to_string())?;
    let full = is_full(&c);
    let cones = if full {
        let b = phi_from_complex(&c).map_err(|e| e.to_string())?;
        serde_json::to_value(b.cones()).map_err(|e| e.to_string())?
    } else {
        serde_json::Value::Null
    };
    let out = serde_json::json!({
        "n": c.n(),
        "maximal_faces": c.maximal_faces(),
        "full": full,
        "bunch": cones,
    });
    Ok(out.to_string())
}

/// Chambers of `𝒜(n)` whose closure contains the ray.
pub fn chambers_at(n: usize, ray: &str) -> Result<u64, String> {
    let a = build_a(n).map_err(|e| e.to_string())?;
    let ray = parse_vector(ray)?;
    count_chambers_at_ray(&a, &ray, Method::Enumerate).map_err(|e| e.to_string())
}

/// Label every pixel of the square `base + s u + t v`, `s, t ∈ [-1, 1]`, by
/// its chamber of `𝒜(5)`: 0 off the positive orthant or on a wall, otherwise
/// `1 +` the index of its sign vector in order of first appearance. Rows run
/// from `t = 1` down to `t = -1`.
pub fn slice(width: u32, height: u32, base: &[i32], u: &[i32], v: &[i32]) -> Result<Vec<u32>, String> {
    if [base.len(), u.len(), v.len()].iter().any(|&l| l != SLICE_N) {
        return Err(format!("base, u and v need {SLICE_N} entries"));
    }
    if width == 0 || height == 0 || width > 2048 || height > 2048 {
        return Err("width and height must be in 1..=2048".into());
    }
    let walls: Vec<Subset> = (0..1u32 << (SLICE_N - 1)).map(Subset).collect();
    let (w, h) = (width as i64, height as i64);
    let mut seen: HashMap<u32, u32> = HashMap::new();
    let mut out = Vec::with_capacity((width * height) as usize);
    let mut theta = [0i64; SLICE_N];
    for row in 0..h {
        let t = h - 1 - 2 * row;
        for col in 0..w {
            let s = 2 * col - (w - 1);
            for k in 0..SLICE_N {
                theta[k] = w * h * base[k] as i64 + s * h * u[k] as i64 + t * w * v[k] as i64;
            }
            if theta.iter().any(|&x| x <= 0) {
                out.push(0);
                continue;
            }
            let mut key = 0u32;
            let mut on_wall = false;
            for (bit, i) in walls.iter().enumerate() {
                let val: i64 = (1..=SLICE_N)
                    .map(|k| if i.contains(k) { -theta[k - 1] } else { theta[k - 1] })
                    .sum();
                if val == 0 {
                    on_wall = true;
                    break;
                }
                key |= ((val > 0) as u32) << bit;
            }
            if on_wall {
                out.push(0);
                continue;
            }
            let next = seen.len() as u32 + 1;
            out.push(*seen.entry(key).or_insert(next));
        }
    }
    Ok(out)
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen(js_name = complexFromTheta)]
pub fn complex_from_theta(theta: &str) -> Result<String, JsError> {
    complex_json(theta).map_err(js)
}

#[wasm_bindgen(js_name = chambersAtRay)]
pub fn chambers_at_ray(n: usize, ray: &str) -> Result<u32, JsError> {
    chambers_at(n, ray).map(|c| c as u32).map_err(js)
}

#[wasm_bindgen(js_name = sliceLabels)]
pub fn slice_labels(width: u32, height: u32, base: &[i32], u: &[i32], v: &[i32]) -> Result<Vec<u32>, JsError> {
    slice(width, height, base, u, v).map_err(js)
}
