//! Triangle tessellation of the u–v domain and Wavefront OBJ output.
//!
//! Vertex `(i, j)` sits at `(u, v) = (i/n, j/n)` with linear index
//! `j·(n+1) + i`. Cell `(i, j)` is split along its rising diagonal
//! (`DiagNE`) as `[(i,j), (i+1,j), (i+1,j+1)] + [(i,j), (i+1,j+1), (i,j+1)]`
//! or along its falling diagonal (`DiagNW`) as
//! `[(i,j), (i+1,j), (i,j+1)] + [(i+1,j), (i+1,j+1), (i,j+1)]`. Triangles are
//! counter-clockwise in the u–v plane, so they face along `P_u × P_v`.

use std::fmt::Write as _;

use crate::analysis::unit_normal;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::patch::{eval_patch_jet, Basis, GeometricPatch, ParamMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TessPattern {
    /// Every cell split along `v = u`.
    #[default]
    DiagNE,
    /// Every cell split along `v = -u`.
    DiagNW,
    /// Checkerboard: `DiagNE` on even `i + j`, `DiagNW` on odd.
    Alternating,
}

impl TessPattern {
    pub const ALL: [TessPattern; 3] = [
        TessPattern::DiagNE,
        TessPattern::DiagNW,
        TessPattern::Alternating,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TessPattern::DiagNE => "diag-ne",
            TessPattern::DiagNW => "diag-nw",
            TessPattern::Alternating => "alternating",
        }
    }

    fn splits_ne(self, i: usize, j: usize) -> bool {
        match self {
            TessPattern::DiagNE => true,
            TessPattern::DiagNW => false,
            TessPattern::Alternating => (i + j).is_multiple_of(2),
        }
    }
}

impl std::str::FromStr for TessPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TessPattern::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pattern {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Unit normals; zero where the patch normal is degenerate.
    pub normals: Vec<[f64; 3]>,
    pub uvs: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Indices of vertices whose normal was degenerate.
    pub degenerate: Vec<usize>,
    pub pattern: TessPattern,
}

impl TriangleMesh {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Triangle indices for an `n × n` grid under `pattern`.
pub fn grid_triangles(n: usize, pattern: TessPattern) -> Vec<[usize; 3]> {
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut tris = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            if pattern.splits_ne(i, j) {
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            } else {
                tris.push([a, b, d]);
                tris.push([b, c, d]);
            }
        }
    }
    tris
}

/// Tessellate a Hermite patch on an `n × n` grid.
pub fn tessellate(p: &GeometricPatch, n: usize, pattern: TessPattern) -> Result<TriangleMesh> {
    tessellate_with(p, n, pattern, Exec::default())
}

/// [`tessellate`] with an explicit execution mode; rows of vertices are
/// evaluated independently, output is identical for both modes.
pub fn tessellate_with(
    p: &GeometricPatch,
    n: usize,
    pattern: TessPattern,
    exec: Exec,
) -> Result<TriangleMesh> {
    p.require_basis(Basis::Hermite)?;
    if n == 0 {
        return Err(Error::InvalidArgument("tessellation needs n >= 1".into()));
    }
    let nf = n as f64;
    let rows: Vec<usize> = (0..=n).collect();
    let evaluated = par::map(exec, &rows, |&j| -> Result<Vec<_>> {
        let v = j as f64 / nf;
        (0..=n)
            .map(|i| {
                let u = i as f64 / nf;
                let jet = eval_patch_jet(p, u, v, ParamMode::Strict)?;
                Ok((jet.point, unit_normal(&jet), [u, v]))
            })
            .collect()
    });

    let count = (n + 1) * (n + 1);
    let mut mesh = TriangleMesh {
        vertices: Vec::with_capacity(count),
        normals: Vec::with_capacity(count),
        uvs: Vec::with_capacity(count),
        triangles: grid_triangles(n, pattern),
        degenerate: Vec::new(),
        pattern,
    };
    for row in evaluated {
        for (point, normal, uv) in row? {
            if normal.is_none() {
                mesh.degenerate.push(mesh.vertices.len());
            }
            mesh.vertices.push(point);
            mesh.normals.push(normal.unwrap_or([0.0; 3]));
            mesh.uvs.push(uv);
        }
    }
    Ok(mesh)
}

/// Fixed 17-significant-digit rendering used for every float in exported files.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// OBJ text for a single mesh.
pub fn export_obj(m: &TriangleMesh) -> String {
    export_obj_set(std::slice::from_ref(m))
}

/// OBJ text for several meshes, each in its own group `g patch_<k>`.
///
/// Empty meshes produce no group. Indices are 1-based and global.
pub fn export_obj_set(meshes: &[TriangleMesh]) -> String {
    let mut out = String::new();
    out.push_str("# hspatch triangle mesh\n");
    let total: usize = meshes.iter().map(|m| m.vertices.len()).sum();
    let faces: usize = meshes.iter().map(|m| m.triangles.len()).sum();
    let _ = writeln!(out, "# vertices {total} faces {faces}");
    let mut base = 1;
    for (k, m) in meshes.iter().enumerate() {
        if m.is_empty() {
            continue;
        }
        let _ = writeln!(out, "g patch_{k}");
        for p in &m.vertices {
            let _ = writeln!(
                out,
                "v {} {} {}",
                fmt_f64(p[0]),
                fmt_f64(p[1]),
                fmt_f64(p[2])
            );
        }
        for t in &m.uvs {
            let _ = writeln!(out, "vt {} {}", fmt_f64(t[0]), fmt_f64(t[1]));
        }
        for nrm in &m.normals {
            let _ = writeln!(
                out,
                "vn {} {} {}",
                fmt_f64(nrm[0]),
                fmt_f64(nrm[1]),
                fmt_f64(nrm[2])
            );
        }
        for tri in &m.triangles {
            let [a, b, c] = tri.map(|i| i + base);
            let _ = writeln!(out, "f {a}/{a}/{a} {b}/{b}/{b} {c}/{c}/{c}");
        }
        base += m.vertices.len();
    }
    out
}

/// Minimal OBJ reader for files written by [`export_obj_set`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjData {
    pub groups: Vec<String>,
    pub vertices: Vec<[f64; 3]>,
    pub uvs: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 3]>,
    /// 0-based vertex indices.
    pub faces: Vec<[usize; 3]>,
}

pub fn parse_obj(text: &str) -> Result<ObjData> {
    let bad =
        |line: usize, msg: &str| Error::InvalidArgument(format!("obj line {}: {msg}", line + 1));
    let mut obj = ObjData::default();
    for (ln, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let Some(tag) = parts.next() else { continue };
        let nums = |parts: std::str::SplitWhitespace<'_>| -> Result<Vec<f64>> {
            parts
                .map(|s| s.parse::<f64>().map_err(|_| bad(ln, "bad number")))
                .collect()
        };
        match tag {
            "#" => {}
            "g" => obj.groups.push(parts.collect::<Vec<_>>().join(" ")),
            "v" | "vn" => {
                let v = nums(parts)?;
                let v: [f64; 3] = v.try_into().map_err(|_| bad(ln, "expected 3 components"))?;
                if tag == "v" {
                    obj.vertices.push(v);
                } else {
                    obj.normals.push(v);
                }
            }
            "vt" => {
                let v = nums(parts)?;
                obj.uvs
                    .push(v.try_into().map_err(|_| bad(ln, "expected 2 components"))?);
            }
            "f" => {
                let idx: Vec<usize> = parts
                    .map(|s| {
                        s.split('/')
                            .next()
                            .and_then(|i| i.parse::<usize>().ok())
                            .filter(|&i| i >= 1)
                            .map(|i| i - 1)
                            .ok_or_else(|| bad(ln, "bad face index"))
                    })
                    .collect::<Result<_>>()?;
                obj.faces.push(
                    idx.try_into()
                        .map_err(|_| bad(ln, "only triangles are supported"))?,
                );
            }
            _ => return Err(bad(ln, "unsupported statement")),
        }
    }
    Ok(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Mat4;
    use crate::hs::CoordInput;

    fn unit_square() -> GeometricPatch {
        let x = CoordInput::new(
            [0.0, 0.0, 1.0, 1.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0],
        )
        .to_hermite([0.0; 4]);
        let y = CoordInput::new(
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        )
        .to_hermite([0.0; 4]);
        GeometricPatch::new(x, y, Mat4::ZERO, Basis::Hermite)
    }

    #[test]
    fn single_cell_counts() {
        let m = tessellate(&unit_square(), 1, TessPattern::DiagNE).unwrap();
        assert_eq!((m.vertices.len(), m.triangles.len()), (4, 2));
    }

    #[test]
    fn counts_for_n8_all_patterns() {
        for pat in TessPattern::ALL {
            let m = tessellate(&unit_square(), 8, pat).unwrap();
            assert_eq!((m.vertices.len(), m.triangles.len()), (81, 128));
            assert!(m.triangles.iter().flatten().all(|&i| i < 81));
        }
    }

    #[test]
    fn planar_patch_normals_point_up() {
        let m = tessellate(&unit_square(), 4, TessPattern::Alternating).unwrap();
        assert!(m.degenerate.is_empty());
        for n in &m.normals {
            assert_eq!(*n, [0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn triangles_are_counter_clockwise_in_uv() {
        for pat in TessPattern::ALL {
            let m = tessellate(&unit_square(), 5, pat).unwrap();
            for t in &m.triangles {
                let [a, b, c] = t.map(|i| m.uvs[i]);
                let area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
                assert!(area > 0.0, "{pat:?} {t:?}");
            }
        }
    }

    #[test]
    fn first_face_of_unit_square() {
        let m = tessellate(&unit_square(), 1, TessPattern::DiagNE).unwrap();
        let obj = export_obj(&m);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2);
        let first = obj.lines().find(|l| l.starts_with("f ")).unwrap();
        assert_eq!(first, "f 1/1/1 2/2/2 4/4/4");
    }

    #[test]
    fn empty_mesh_is_header_only() {
        let obj = export_obj(&TriangleMesh::default());
        assert!(obj.lines().all(|l| l.starts_with('#')));
    }

    #[test]
    fn obj_round_trip_preserves_vertices() {
        let mut p = unit_square();
        p.z.0[2][3] = 0.37;
        p.z.0[0][1] = 1.0 / 3.0;
        let m = tessellate(&p, 6, TessPattern::DiagNW).unwrap();
        let obj = parse_obj(&export_obj(&m)).unwrap();
        assert_eq!(obj.vertices, m.vertices);
        assert_eq!(obj.normals, m.normals);
        assert_eq!(obj.faces, m.triangles);
        assert_eq!(obj.groups, vec!["patch_0".to_string()]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut p = unit_square();
        p.z.0[3][3] = 2.0;
        let a = tessellate_with(&p, 7, TessPattern::Alternating, Exec::Sequential).unwrap();
        let b = tessellate_with(&p, 7, TessPattern::Alternating, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_grid_is_rejected() {
        assert!(tessellate(&unit_square(), 0, TessPattern::DiagNE).is_err());
    }
}
