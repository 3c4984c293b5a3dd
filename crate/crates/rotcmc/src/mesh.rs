//! Triangle meshes of the classified surfaces and their export to OBJ via
//! stereographic projection (Berger) or cylindrical coordinates (Sl(2,R)).

use std::io::Write;

use num_complex::Complex64;

use crate::classify::{turning_points, FlowParams, TurningBand};
use crate::closed_form;
use crate::error::{Error, Result};
use crate::profile::{default_start, integrate_profile, IntegrateOpts};
use crate::space::{AmbientPoint, SpaceKind, SpaceParams};

/// A triangle mesh with the original ambient coordinates kept per vertex.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub ambient: Vec<AmbientPoint>,
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = std::collections::HashSet::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        self.vertices.len() as i64 - edges.len() as i64 + self.triangles.len() as i64
    }
}

/// Stereographic projection R^4 -> R^3 from the unit pole `pole`.
pub struct Stereographic {
    pole: [f64; 4],
    basis: [[f64; 4]; 3],
}

fn to_r4(p: &AmbientPoint) -> [f64; 4] {
    [p.z.re, p.z.im, p.w.re, p.w.im]
}

impl Stereographic {
    pub fn new(pole: &AmbientPoint) -> Self {
        let n = to_r4(pole);
        // orthonormal basis of the pole's complement by Gram-Schmidt over
        // the standard basis (deterministic)
        let mut basis: Vec<[f64; 4]> = Vec::new();
        for k in 0..4 {
            let mut v = [0.0; 4];
            v[k] = 1.0;
            let mut w = v;
            let dn: f64 = (0..4).map(|i| v[i] * n[i]).sum();
            for i in 0..4 {
                w[i] -= dn * n[i];
            }
            for b in &basis {
                let d: f64 = (0..4).map(|i| w[i] * b[i]).sum();
                for i in 0..4 {
                    w[i] -= d * b[i];
                }
            }
            let norm: f64 = (0..4).map(|i| w[i] * w[i]).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for x in &mut w {
                    *x /= norm;
                }
                basis.push(w);
                if basis.len() == 3 {
                    break;
                }
            }
        }
        Self { pole: n, basis: [basis[0], basis[1], basis[2]] }
    }

    pub fn project(&self, p: &AmbientPoint) -> Result<[f64; 3]> {
        let v = to_r4(p);
        let dn: f64 = (0..4).map(|i| v[i] * self.pole[i]).sum();
        let denom = 1.0 - dn;
        if denom.abs() < 1e-9 {
            return Err(Error::PoleOnSurface { dist: denom.abs() });
        }
        let mut out = [0.0; 3];
        for (k, b) in self.basis.iter().enumerate() {
            out[k] = (0..4).map(|i| v[i] * b[i]).sum::<f64>() / denom;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshSurface {
    /// closed-form CMC sphere of mean curvature H
    Sphere,
    /// Clifford torus at the given H (radius r_-)
    CliffordTorus,
    /// unduloid/nodoid tube integrated from (H, E) over `periods` oscillations
    ProfileTube,
    GreatSphere,
}

#[derive(Debug, Clone, Copy)]
pub struct MeshOpts {
    pub nu: usize,
    pub nv: usize,
    /// oscillations of the profile tube
    pub periods: usize,
    /// stereographic pole; default (0, -i) which misses all H > 0 spheres,
    /// tori and tubes
    pub pole: Option<AmbientPoint>,
}

impl Default for MeshOpts {
    fn default() -> Self {
        Self { nu: 64, nv: 64, periods: 1, pole: None }
    }
}

fn default_pole(surface: MeshSurface) -> AmbientPoint {
    match surface {
        // (0, -i) lies on the great sphere; use (i, 0) there instead
        MeshSurface::GreatSphere => AmbientPoint::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)),
        _ => AmbientPoint::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)),
    }
}

/// Samples the requested surface into ambient points organised as rows of
/// a (closed or open) grid plus optional cap vertices.
pub fn build_mesh(
    surface: MeshSurface,
    fp: &FlowParams,
    sp: &SpaceParams,
    opts: &MeshOpts,
) -> Result<Mesh> {
    let (nu, nv) = (opts.nu.max(3), opts.nv.max(3));
    match surface {
        MeshSurface::CliffordTorus => {
            let r = closed_form::clifford_radius(fp.h, closed_form::RadiusSign::Minus, sp)?;
            let q = (1.0 - r * r).sqrt();
            let rows: Vec<Vec<AmbientPoint>> = (0..nu)
                .map(|i| {
                    let su = 2.0 * std::f64::consts::PI * i as f64 / nu as f64;
                    (0..nv)
                        .map(|j| {
                            let tv = 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
                            AmbientPoint::new(
                                r * Complex64::new(su.cos(), su.sin()),
                                q * Complex64::new(tv.cos(), tv.sin()),
                            )
                        })
                        .collect()
                })
                .collect();
            grid_mesh(rows, true, true, sp, opts, surface)
        }
        MeshSurface::Sphere => {
            let a = closed_form::sphere_half_domain(fp.h, sp)?;
            let rows: Vec<Vec<AmbientPoint>> = (1..nu)
                .map(|i| {
                    let x = -a + 2.0 * a * i as f64 / nu as f64;
                    (0..nv)
                        .map(|j| {
                            let t = -std::f64::consts::PI
                                + 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
                            closed_form::sphere_immersion(x, t, fp.h, sp).unwrap()
                        })
                        .collect()
                })
                .collect();
            // both poles sit on the axis at angles +/- y0
            let y0 = closed_form::sphere_y0(fp.h, sp)?;
            let cap_lo = AmbientPoint::new(Complex64::new(y0.cos(), y0.sin()), Complex64::new(0.0, 0.0));
            let cap_hi = AmbientPoint::new(Complex64::new(y0.cos(), -y0.sin()), Complex64::new(0.0, 0.0));
            capped_sphere_mesh(rows, cap_lo, cap_hi, sp, opts, surface)
        }
        MeshSurface::GreatSphere => {
            let rows: Vec<Vec<AmbientPoint>> = (1..nu)
                .map(|i| {
                    let u = std::f64::consts::PI * i as f64 / nu as f64;
                    (0..nv)
                        .map(|j| {
                            let t = 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
                            AmbientPoint::new(
                                Complex64::new(u.cos(), 0.0),
                                u.sin() * Complex64::new(t.cos(), t.sin()),
                            )
                        })
                        .collect()
                })
                .collect();
            let cap_lo = AmbientPoint::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
            let cap_hi = AmbientPoint::new(Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0));
            capped_sphere_mesh(rows, cap_lo, cap_hi, sp, opts, surface)
        }
        MeshSurface::ProfileTube => {
            let band = turning_points(fp, sp)?;
            if matches!(band, TurningBand::Degenerate { .. }) {
                return Err(Error::DegenerateBand);
            }
            let start = default_start(fp, sp)?;
            let iopts = IntegrateOpts {
                max_turnings: Some(2 * opts.periods.max(1)),
                max_step: 0.01,
                ..Default::default()
            };
            let curve = integrate_profile(&start, fp, sp, f64::INFINITY, &iopts)?;
            let stride = (curve.samples.len() / (nu * opts.periods.max(1))).max(1);
            let rows: Vec<Vec<AmbientPoint>> = curve
                .samples
                .iter()
                .step_by(stride)
                .map(|st| {
                    (0..nv)
                        .map(|j| {
                            let t = 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
                            let (radial, fiber) = match sp.kind {
                                SpaceKind::BergerSphere => (st.x.cos(), st.x.sin()),
                                SpaceKind::Sl2R => (st.x.cosh(), st.x.sinh()),
                            };
                            AmbientPoint::new(
                                radial * Complex64::new(st.y.cos(), st.y.sin()),
                                fiber * Complex64::new(t.cos(), t.sin()),
                            )
                        })
                        .collect()
                })
                .collect();
            grid_mesh(rows, false, true, sp, opts, surface)
        }
    }
}

/// Projects ambient rows to R^3 and triangulates a grid.
fn grid_mesh(
    rows: Vec<Vec<AmbientPoint>>,
    close_u: bool,
    close_v: bool,
    sp: &SpaceParams,
    opts: &MeshOpts,
    surface: MeshSurface,
) -> Result<Mesh> {
    let proj = projector(sp, opts, surface);
    let nu = rows.len();
    let nv = rows[0].len();
    let mut ambient = Vec::with_capacity(nu * nv);
    let mut vertices = Vec::with_capacity(nu * nv);
    for row in &rows {
        for p in row {
            ambient.push(*p);
            vertices.push(proj(p)?);
        }
    }
    let mut triangles = Vec::new();
    let u_max = if close_u { nu } else { nu - 1 };
    let v_max = if close_v { nv } else { nv - 1 };
    for i in 0..u_max {
        for j in 0..v_max {
            let (i1, j1) = ((i + 1) % nu, (j + 1) % nv);
            let a = i * nv + j;
            let b = i1 * nv + j;
            let c = i * nv + j1;
            let d = i1 * nv + j1;
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
    }
    Ok(Mesh { ambient, vertices, triangles })
}

fn capped_sphere_mesh(
    rows: Vec<Vec<AmbientPoint>>,
    cap_lo: AmbientPoint,
    cap_hi: AmbientPoint,
    sp: &SpaceParams,
    opts: &MeshOpts,
    surface: MeshSurface,
) -> Result<Mesh> {
    let proj = projector(sp, opts, surface);
    let mut mesh = grid_mesh(rows, false, true, sp, opts, surface)?;
    let nv = opts.nv.max(3);
    let nu_rows = mesh.vertices.len() / nv;
    let lo_idx = mesh.vertices.len();
    mesh.ambient.push(cap_lo);
    mesh.vertices.push(proj(&cap_lo)?);
    let hi_idx = mesh.vertices.len();
    mesh.ambient.push(cap_hi);
    mesh.vertices.push(proj(&cap_hi)?);
    for j in 0..nv {
        let j1 = (j + 1) % nv;
        mesh.triangles.push([lo_idx, j1, j]);
        let base = (nu_rows - 1) * nv;
        mesh.triangles.push([hi_idx, base + j, base + j1]);
    }
    Ok(mesh)
}

type Projector<'a> = Box<dyn Fn(&AmbientPoint) -> Result<[f64; 3]> + 'a>;

fn projector(sp: &SpaceParams, opts: &MeshOpts, surface: MeshSurface) -> Projector<'static> {
    match sp.kind {
        SpaceKind::BergerSphere => {
            let stereo = Stereographic::new(&opts.pole.unwrap_or_else(|| default_pole(surface)));
            Box::new(move |p| stereo.project(p))
        }
        SpaceKind::Sl2R => {
            // unrolled cylindrical picture: (|w| cos t, |w| sin t, arg z)
            Box::new(|p| {
                let r = p.w.norm();
                let t = p.w.arg();
                Ok([r * t.cos(), r * t.sin(), p.z.arg()])
            })
        }
    }
}

/// Axis-aligned bounding box prefilter + exact triangle-triangle tests;
/// reports how many non-adjacent triangle pairs intersect.
pub fn self_intersections(mesh: &Mesh) -> usize {
    let tri_box: Vec<([f64; 3], [f64; 3])> = mesh
        .triangles
        .iter()
        .map(|t| {
            let mut lo = [f64::INFINITY; 3];
            let mut hi = [f64::NEG_INFINITY; 3];
            for &v in t {
                for k in 0..3 {
                    lo[k] = lo[k].min(mesh.vertices[v][k]);
                    hi[k] = hi[k].max(mesh.vertices[v][k]);
                }
            }
            (lo, hi)
        })
        .collect();
    let mut count = 0;
    for i in 0..mesh.triangles.len() {
        'outer: for j in (i + 1)..mesh.triangles.len() {
            let (ti, tj) = (&mesh.triangles[i], &mesh.triangles[j]);
            if ti.iter().any(|v| tj.contains(v)) {
                continue; // shared vertices: adjacent
            }
            for k in 0..3 {
                if tri_box[i].1[k] < tri_box[j].0[k] || tri_box[j].1[k] < tri_box[i].0[k] {
                    continue 'outer;
                }
            }
            let a = [mesh.vertices[ti[0]], mesh.vertices[ti[1]], mesh.vertices[ti[2]]];
            let b = [mesh.vertices[tj[0]], mesh.vertices[tj[1]], mesh.vertices[tj[2]]];
            if tri_tri_intersect(&a, &b) {
                count += 1;
            }
        }
    }
    count
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Segment-triangle based triangle-triangle intersection: two triangles
/// intersect iff some edge of one crosses the face of the other (the
/// coplanar grazing case is irrelevant at floating-point resolution here).
fn tri_tri_intersect(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> bool {
    for (t1, t2) in [(a, b), (b, a)] {
        for e in 0..3 {
            if segment_hits_triangle(t1[e], t1[(e + 1) % 3], t2) {
                return true;
            }
        }
    }
    false
}

fn segment_hits_triangle(p: [f64; 3], q: [f64; 3], tri: &[[f64; 3]; 3]) -> bool {
    let (v0, v1, v2) = (tri[0], tri[1], tri[2]);
    let dir = sub(q, p);
    let e1 = sub(v1, v0);
    let e2 = sub(v2, v0);
    let h = cross(dir, e2);
    let det = dot(e1, h);
    if det.abs() < 1e-14 {
        return false;
    }
    let inv = 1.0 / det;
    let s = sub(p, v0);
    let u = dot(s, h) * inv;
    if !(0.0..=1.0).contains(&u) {
        return false;
    }
    let qv = cross(s, e1);
    let v = dot(dir, qv) * inv;
    if v < 0.0 || u + v > 1.0 {
        return false;
    }
    let t = dot(e2, qv) * inv;
    (1e-12..=1.0 - 1e-12).contains(&t)
}

/// Writes the mesh as OBJ: `v` lines in R^3, `f` lines, and per-vertex
/// comments carrying the original ambient coordinates.
pub fn write_obj(out: &mut dyn Write, mesh: &Mesh, header: &[(String, String)]) -> Result<()> {
    writeln!(out, "# rotcmc mesh v{}", env!("CARGO_PKG_VERSION"))?;
    for (k, v) in header {
        writeln!(out, "# {k} = {v}")?;
    }
    for (p, v) in mesh.ambient.iter().zip(&mesh.vertices) {
        writeln!(out, "# r4 {} {} {} {}", p.z.re, p.z.im, p.w.re, p.w.im)?;
        writeln!(out, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for t in &mesh.triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}
