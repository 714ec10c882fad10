//! Triangle mesh of the real surface `V(f)` in an affine chart
//! `x_chart = 1`, by marching tetrahedra over a cube grid, and OBJ output.

use std::collections::HashMap;
use std::fmt::Write;

use num_traits::ToPrimitive;

use detquartic_core::MultiPoly;

use crate::Error;

/// The cube is split into six tetrahedra around its main diagonal, so
/// neighbouring cubes triangulate shared faces the same way.
const TETS: [[usize; 4]; 6] = [[0, 1, 3, 7], [0, 3, 2, 7], [0, 2, 6, 7], [0, 6, 4, 7], [0, 4, 5, 7], [0, 5, 1, 7]];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

struct RealPoly {
    terms: Vec<([i32; 4], f64)>,
}

impl RealPoly {
    fn new(f: &MultiPoly) -> Result<Self, Error> {
        if f.num_vars() != 4 {
            return Err(Error::Format("expected a form in four variables".into()));
        }
        let terms = f
            .real_coeffs()
            .ok_or_else(|| Error::Format("the surface has non-real coefficients".into()))?
            .into_iter()
            .map(|(m, c)| {
                let e = core::array::from_fn(|k| m.0[k] as i32);
                (e, c.to_f64().unwrap_or(0.0))
            })
            .collect();
        Ok(Self { terms })
    }

    fn eval(&self, x: &[f64; 4]) -> f64 {
        self.terms.iter().map(|(e, c)| c * (0..4).map(|k| x[k].powi(e[k])).product::<f64>()).sum()
    }
}

fn lerp(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    core::array::from_fn(|k| a[k] + t * (b[k] - a[k]))
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    core::array::from_fn(|k| a[k] - b[k])
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Grid<'a> {
    n: usize,
    points: Vec<[f64; 3]>,
    values: Vec<f64>,
    edge_vertex: HashMap<(usize, usize), usize>,
    mesh: &'a mut Mesh,
}

impl Grid<'_> {
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * (self.n + 1) + j) * (self.n + 1) + k
    }

    fn crossing(&mut self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = self.edge_vertex.get(&key) {
            return v;
        }
        let (fa, fb) = (self.values[key.0], self.values[key.1]);
        let p = lerp(self.points[key.0], self.points[key.1], fa / (fa - fb));
        self.mesh.vertices.push(p);
        let v = self.mesh.vertices.len() - 1;
        self.edge_vertex.insert(key, v);
        v
    }

    /// Adds a triangle whose normal points towards the positive side.
    fn triangle(&mut self, t: [usize; 3], positive: usize) {
        let [a, b, c] = t.map(|v| self.mesh.vertices[v]);
        let n = cross(sub(b, a), sub(c, a));
        let centroid: [f64; 3] = core::array::from_fn(|k| (a[k] + b[k] + c[k]) / 3.0);
        if dot(n, sub(self.points[positive], centroid)) < 0.0 {
            self.mesh.faces.push([t[0], t[2], t[1]]);
        } else {
            self.mesh.faces.push(t);
        }
    }

    fn tetrahedron(&mut self, v: [usize; 4]) {
        let (pos, neg): (Vec<usize>, Vec<usize>) = v.iter().partition(|&&g| self.values[g] > 0.0);
        match (pos.len(), neg.len()) {
            (1, 3) | (3, 1) => {
                let (lone, rest) = if pos.len() == 1 { (pos[0], neg) } else { (neg[0], pos) };
                let t = [self.crossing(lone, rest[0]), self.crossing(lone, rest[1]), self.crossing(lone, rest[2])];
                let positive = if self.values[lone] > 0.0 { lone } else { rest[0] };
                self.triangle(t, positive);
            }
            (2, 2) => {
                let (a, b, c, d) = (pos[0], pos[1], neg[0], neg[1]);
                let q = [self.crossing(a, c), self.crossing(a, d), self.crossing(b, d), self.crossing(b, c)];
                self.triangle([q[0], q[1], q[2]], a);
                self.triangle([q[0], q[2], q[3]], a);
            }
            _ => {}
        }
    }
}

/// Meshes `V(f) ∩ {x_chart = 1}` over `[−half_width, half_width]³` in the
/// remaining coordinates, in increasing index order.
pub fn march(f: &MultiPoly, chart: usize, resolution: usize, half_width: f64) -> Result<Mesh, Error> {
    if chart > 3 {
        return Err(Error::Format("chart index must be 0..3".into()));
    }
    if resolution == 0 || !(half_width > 0.0) {
        return Err(Error::Format("resolution and box size must be positive".into()));
    }
    let poly = RealPoly::new(f)?;
    let n = resolution;
    let free: Vec<usize> = (0..4).filter(|&k| k != chart).collect();
    let coord = |i: usize| -half_width + 2.0 * half_width * i as f64 / n as f64;
    let mut points = Vec::with_capacity((n + 1).pow(3));
    let mut values = Vec::with_capacity((n + 1).pow(3));
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                let p = [coord(i), coord(j), coord(k)];
                let mut x = [1.0; 4];
                for (slot, &var) in free.iter().enumerate() {
                    x[var] = p[slot];
                }
                let v = poly.eval(&x);
                // exact zeros count as positive so every crossing is strict
                values.push(if v == 0.0 { f64::MIN_POSITIVE } else { v });
                points.push(p);
            }
        }
    }
    let mut mesh = Mesh::default();
    let mut grid = Grid { n, points, values, edge_vertex: HashMap::new(), mesh: &mut mesh };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let corner: [usize; 8] =
                    core::array::from_fn(|b| grid.index(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1)));
                for t in TETS {
                    grid.tetrahedron(t.map(|c| corner[c]));
                }
            }
        }
    }
    Ok(mesh)
}

impl Mesh {
    pub fn to_obj(&self, header: &str) -> String {
        let mut s = String::new();
        for line in header.lines() {
            let _ = writeln!(s, "# {line}");
        }
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.6} {:.6} {:.6}", v[0], v[1], v[2]);
        }
        for f in &self.faces {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        s
    }

    /// Edge-connected face components, and how many of them are closed
    /// (every edge shared by exactly two faces).
    pub fn components(&self) -> (usize, usize) {
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut edges: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                edges.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        let mut open = vec![false; self.faces.len()];
        for fs in edges.values() {
            if fs.len() != 2 {
                fs.iter().for_each(|&f| open[f] = true);
            }
            for w in fs.windows(2) {
                let (ra, rb) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
                parent[ra] = rb;
            }
        }
        let mut comp_open: HashMap<usize, bool> = HashMap::new();
        for f in 0..self.faces.len() {
            let r = root(&mut parent, f);
            *comp_open.entry(r).or_insert(false) |= open[f];
        }
        let closed = comp_open.values().filter(|&&o| !o).count();
        (comp_open.len(), closed)
    }
}
