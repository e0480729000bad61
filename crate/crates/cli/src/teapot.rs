//! The classic Bézier teapot text format: a patch count, one line of 16
//! comma-separated one-based vertex indices per patch, a vertex count, then one
//! `x, y, z` line per vertex.

use hspatch::{Basis, GeometricPatch, Mat4};

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub struct TeapotDocument {
    /// One-based indices, row-major over the 4×4 control net.
    pub patches: Vec<[usize; 16]>,
    pub vertices: Vec<[f64; 3]>,
}

impl TeapotDocument {
    /// Control net of patch `k`: entry `(i, j)` is vertex `patches[k][4i + j]`.
    pub fn bezier_patch(&self, k: usize) -> GeometricPatch {
        let idx = &self.patches[k];
        let coord = |c: usize| Mat4::from_fn(|i, j| self.vertices[idx[4 * i + j] - 1][c]);
        GeometricPatch::new(coord(0), coord(1), coord(2), Basis::Bezier)
    }

    pub fn bezier_patches(&self) -> Vec<GeometricPatch> {
        (0..self.patches.len())
            .map(|k| self.bezier_patch(k))
            .collect()
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with its one-based number.
    fn next_content(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        for (k, line) in self.inner.by_ref() {
            let line = line.trim();
            if !line.is_empty() {
                return Ok((k + 1, line));
            }
        }
        Err(ParseError::new(0, 0, what, "unexpected end of file"))
    }
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

fn parse_count(lines: &mut Lines<'_>, what: &str) -> Result<usize, ParseError> {
    let (n, line) = lines.next_content(what)?;
    line.parse()
        .map_err(|_| ParseError::new(n, 0, what, format!("expected a count, found {line:?}")))
}

pub fn parse_teapot(text: &str) -> Result<TeapotDocument, ParseError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let patch_count = parse_count(&mut lines, "patch count")?;
    let mut patches = Vec::with_capacity(patch_count);
    let mut index_lines = Vec::with_capacity(patch_count);
    for k in 0..patch_count {
        let what = format!("patch {}", k + 1);
        let (n, line) = lines.next_content(&what)?;
        let idx: Vec<usize> = fields(line)
            .map(|s| {
                s.parse()
                    .map_err(|_| ParseError::new(n, 0, what.as_str(), format!("bad index {s:?}")))
            })
            .collect::<Result<_, _>>()?;
        let idx: [usize; 16] = idx.try_into().map_err(|v: Vec<usize>| {
            ParseError::new(
                n,
                0,
                what.as_str(),
                format!("expected 16 indices, found {}", v.len()),
            )
        })?;
        patches.push(idx);
        index_lines.push(n);
    }

    let vertex_count = parse_count(&mut lines, "vertex count")?;
    let mut vertices = Vec::with_capacity(vertex_count);
    for k in 0..vertex_count {
        let what = format!("vertex {}", k + 1);
        let (n, line) = lines.next_content(&what)?;
        let xyz: Vec<f64> = fields(line)
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        ParseError::new(n, 0, what.as_str(), format!("bad coordinate {s:?}"))
                    })
            })
            .collect::<Result<_, _>>()?;
        let xyz: [f64; 3] = xyz.try_into().map_err(|v: Vec<f64>| {
            ParseError::new(
                n,
                0,
                what.as_str(),
                format!("expected 3 coordinates, found {}", v.len()),
            )
        })?;
        vertices.push(xyz);
    }
    if let Ok((n, line)) = lines.next_content("") {
        return Err(ParseError::new(
            n,
            0,
            "",
            format!("unexpected trailing content {line:?}"),
        ));
    }

    for (k, idx) in patches.iter().enumerate() {
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > vertex_count) {
            return Err(ParseError::new(
                index_lines[k],
                0,
                format!("patch {}", k + 1),
                format!("index {bad} outside 1..={vertex_count}"),
            ));
        }
    }
    Ok(TeapotDocument { patches, vertices })
}
