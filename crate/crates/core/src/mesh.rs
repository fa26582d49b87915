//! Conforming 2D triangular meshes with newest-vertex bisection,
//! recursive conformity closure and parent/child genealogy.
//!
//! Local conventions: local edge `i` of a triangle is the edge opposite
//! local vertex `i`, i.e. it connects vertices `(i+1)%3` and `(i+2)%3`.
//! The refinement edge of an element is stored as a local edge index;
//! bisection inserts the midpoint of that edge, and both children take
//! the new vertex as their "newest" vertex (their refinement edge is
//! the edge opposite it). Midpoint vertices are deduplicated by the
//! sorted parent-edge key so the two sides of a shared edge agree on
//! the vertex id.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Sorted pair of vertex ids identifying an undirected edge.
pub type EdgeKey = (usize, usize);

/// Canonical key for the edge between `a` and `b`.
pub fn edge_key(a: usize, b: usize) -> EdgeKey {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug)]
pub struct Element {
    /// Global vertex ids, counter-clockwise.
    pub vertices: [usize; 3],
    /// Local index of the refinement edge (edge opposite that vertex).
    pub refinement_edge: usize,
    pub parent: Option<usize>,
    pub children: Option<[usize; 2]>,
    pub generation: u32,
    pub active: bool,
}

/// Elements created by one `bisect` call, as `(new id, parent id)` in
/// creation order. Parents of later entries may themselves appear as
/// new elements of earlier entries when the closure cascades.
#[derive(Clone, Debug, Default)]
pub struct RefinementReport {
    pub created: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshError {
    Parse { line: usize, reason: &'static str },
    InvalidTriangle { element: usize },
    NonConforming { edge: EdgeKey },
    UnknownElement { element: usize },
    InactiveElement { element: usize },
}

impl core::fmt::Display for MeshError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MeshError::Parse { line, reason } => {
                write!(f, "mesh parse error at line {line}: {reason}")
            }
            MeshError::InvalidTriangle { element } => {
                write!(f, "triangle {element} has zero or negative area")
            }
            MeshError::NonConforming { edge } => {
                write!(f, "edge ({}, {}) breaks mesh conformity", edge.0, edge.1)
            }
            MeshError::UnknownElement { element } => write!(f, "no element with id {element}"),
            MeshError::InactiveElement { element } => {
                write!(f, "element {element} is not active")
            }
        }
    }
}

impl core::error::Error for MeshError {}

/// Affine map from the reference triangle {(0,0), (1,0), (0,1)} to a
/// physical element: `x = origin + jac * xi`.
#[derive(Clone, Copy, Debug)]
pub struct AffineMap {
    pub origin: [f64; 2],
    pub jac: [[f64; 2]; 2],
    pub det: f64,
    inv: [[f64; 2]; 2],
}

impl AffineMap {
    pub fn to_physical(&self, xi: [f64; 2]) -> [f64; 2] {
        [
            self.origin[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.origin[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    pub fn to_reference(&self, x: [f64; 2]) -> [f64; 2] {
        let dx = x[0] - self.origin[0];
        let dy = x[1] - self.origin[1];
        [
            self.inv[0][0] * dx + self.inv[0][1] * dy,
            self.inv[1][0] * dx + self.inv[1][1] * dy,
        ]
    }

    /// Push a reference gradient to physical coordinates (`B^{-T} g`).
    pub fn gradient_to_physical(&self, g: [f64; 2]) -> [f64; 2] {
        [
            self.inv[0][0] * g[0] + self.inv[1][0] * g[1],
            self.inv[0][1] * g[0] + self.inv[1][1] * g[1],
        ]
    }

    /// Metric `G = B^{-1} B^{-T}` packed as `(g00, g01, g11)`; contracts
    /// reference gradients/Hessians into physical inner products.
    pub fn metric(&self) -> [f64; 3] {
        let i = &self.inv;
        [
            i[0][0] * i[0][0] + i[0][1] * i[0][1],
            i[0][0] * i[1][0] + i[0][1] * i[1][1],
            i[1][0] * i[1][0] + i[1][1] * i[1][1],
        ]
    }
}

#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Vertex>,
    elements: Vec<Element>,
    active: BTreeSet<usize>,
    /// Active elements incident to each current edge (1 or 2 entries).
    edge_elems: BTreeMap<EdgeKey, Vec<usize>>,
    /// Boundary markers, maintained for current boundary edges as they split.
    boundary_marker: BTreeMap<EdgeKey, u32>,
    /// Midpoint vertex created for a bisected edge, keyed by the parent edge.
    midpoints: BTreeMap<EdgeKey, usize>,
}

/// Parses the ASCII mesh format: first content line `nv nt nb`, then
/// `nv` vertex lines `x y`, `nt` triangle lines `v0 v1 v2` and `nb`
/// boundary lines `v0 v1 marker` (marker 1 = Dirichlet). `#` starts a
/// comment; indices are 0-based.
pub fn load_mesh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            None
        } else {
            Some((i + 1, content))
        }
    });

    let (line, header) = lines.next().ok_or(MeshError::Parse {
        line: 0,
        reason: "empty document",
    })?;
    let counts = parse_fields::<usize>(header, 3, line)?;
    let (nv, nt, nb) = (counts[0], counts[1], counts[2]);
    if nt == 0 {
        return Err(MeshError::Parse {
            line,
            reason: "mesh must contain at least one triangle",
        });
    }

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, text) = lines.next().ok_or(MeshError::Parse {
            line: 0,
            reason: "unexpected end of vertex list",
        })?;
        let xy = parse_fields::<f64>(text, 2, line)?;
        if !xy[0].is_finite() || !xy[1].is_finite() {
            return Err(MeshError::Parse {
                line,
                reason: "vertex coordinates must be finite",
            });
        }
        vertices.push(Vertex { x: xy[0], y: xy[1] });
    }

    let mut elements = Vec::with_capacity(nt);
    for id in 0..nt {
        let (line, text) = lines.next().ok_or(MeshError::Parse {
            line: 0,
            reason: "unexpected end of triangle list",
        })?;
        let v = parse_fields::<usize>(text, 3, line)?;
        if v.iter().any(|&i| i >= nv) {
            return Err(MeshError::Parse {
                line,
                reason: "triangle references an unknown vertex",
            });
        }
        let verts = [v[0], v[1], v[2]];
        if signed_area(&vertices, verts) <= 0.0 {
            return Err(MeshError::InvalidTriangle { element: id });
        }
        elements.push(Element {
            vertices: verts,
            refinement_edge: longest_edge(&vertices, verts),
            parent: None,
            children: None,
            generation: 0,
            active: true,
        });
    }

    let mut boundary_marker = BTreeMap::new();
    for _ in 0..nb {
        let (line, text) = lines.next().ok_or(MeshError::Parse {
            line: 0,
            reason: "unexpected end of boundary list",
        })?;
        let v = parse_fields::<usize>(text, 3, line)?;
        if v[0] >= nv || v[1] >= nv {
            return Err(MeshError::Parse {
                line,
                reason: "boundary edge references an unknown vertex",
            });
        }
        boundary_marker.insert(edge_key(v[0], v[1]), v[2] as u32);
    }

    let mut edge_elems: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (id, el) in elements.iter().enumerate() {
        for i in 0..3 {
            let key = edge_key(el.vertices[(i + 1) % 3], el.vertices[(i + 2) % 3]);
            edge_elems.entry(key).or_default().push(id);
        }
    }
    for (&key, elems) in &edge_elems {
        if elems.len() > 2 {
            return Err(MeshError::NonConforming { edge: key });
        }
        if elems.len() == 2 && boundary_marker.contains_key(&key) {
            return Err(MeshError::NonConforming { edge: key });
        }
    }
    for &key in boundary_marker.keys() {
        if !edge_elems.contains_key(&key) {
            return Err(MeshError::NonConforming { edge: key });
        }
    }

    Ok(Mesh {
        active: (0..elements.len()).collect(),
        vertices,
        elements,
        edge_elems,
        boundary_marker,
        midpoints: BTreeMap::new(),
    })
}

fn parse_fields<T: core::str::FromStr>(
    text: &str,
    expected: usize,
    line: usize,
) -> Result<Vec<T>, MeshError> {
    let fields: Result<Vec<T>, _> = text.split_whitespace().map(str::parse).collect();
    match fields {
        Ok(v) if v.len() == expected => Ok(v),
        Ok(_) => Err(MeshError::Parse {
            line,
            reason: "wrong number of fields",
        }),
        Err(_) => Err(MeshError::Parse {
            line,
            reason: "malformed number",
        }),
    }
}

fn signed_area(vertices: &[Vertex], v: [usize; 3]) -> f64 {
    let [a, b, c] = [vertices[v[0]], vertices[v[1]], vertices[v[2]]];
    0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))
}

/// Longest local edge, ties broken by the smallest opposite-vertex index.
fn longest_edge(vertices: &[Vertex], v: [usize; 3]) -> usize {
    let mut best = 0;
    let mut best_len = 0.0;
    for i in 0..3 {
        let a = vertices[v[(i + 1) % 3]];
        let b = vertices[v[(i + 2) % 3]];
        let len = math::hypot(b.x - a.x, b.y - a.y);
        if len > best_len {
            best_len = len;
            best = i;
        }
    }
    best
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Total number of elements ever created, including inactive parents.
    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_active(&self) -> usize {
        self.active.len()
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        self.vertices[id]
    }

    pub fn element(&self, id: usize) -> &Element {
        &self.elements[id]
    }

    pub fn is_active(&self, id: usize) -> bool {
        self.elements.get(id).map(|e| e.active).unwrap_or(false)
    }

    pub fn active_elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter().copied()
    }

    pub fn element_vertices(&self, id: usize) -> [Vertex; 3] {
        let v = self.elements[id].vertices;
        [self.vertices[v[0]], self.vertices[v[1]], self.vertices[v[2]]]
    }

    /// Endpoints (unsorted) of local edge `i`, i.e. the edge opposite
    /// local vertex `i`.
    pub fn element_edge(&self, id: usize, i: usize) -> (usize, usize) {
        let v = self.elements[id].vertices;
        (v[(i + 1) % 3], v[(i + 2) % 3])
    }

    pub fn element_area(&self, id: usize) -> f64 {
        signed_area(&self.vertices, self.elements[id].vertices)
    }

    /// Diameter of an element: its longest edge length.
    pub fn element_diameter(&self, id: usize) -> f64 {
        let mut best = 0.0;
        for i in 0..3 {
            let (a, b) = self.element_edge(id, i);
            best = math::max(best, self.edge_diameter(a, b));
        }
        best
    }

    /// Euclidean length of the edge between two vertices.
    pub fn edge_diameter(&self, a: usize, b: usize) -> f64 {
        let (va, vb) = (self.vertices[a], self.vertices[b]);
        math::hypot(vb.x - va.x, vb.y - va.y)
    }

    pub fn affine_map(&self, id: usize) -> AffineMap {
        let [a, b, c] = self.element_vertices(id);
        let jac = [[b.x - a.x, c.x - a.x], [b.y - a.y, c.y - a.y]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv = [
            [jac[1][1] / det, -jac[0][1] / det],
            [-jac[1][0] / det, jac[0][0] / det],
        ];
        AffineMap {
            origin: [a.x, a.y],
            jac,
            det,
            inv,
        }
    }

    /// All edges of the current (active) mesh.
    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        self.edge_elems.keys().copied()
    }

    /// Active elements sharing an edge of the current mesh.
    pub fn edge_elements(&self, key: EdgeKey) -> &[usize] {
        self.edge_elems.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The other active element sharing `key`, if any.
    pub fn neighbor(&self, elem: usize, key: EdgeKey) -> Option<usize> {
        self.edge_elems
            .get(&key)?
            .iter()
            .copied()
            .find(|&other| other != elem)
    }

    pub fn is_boundary_edge(&self, key: EdgeKey) -> bool {
        self.edge_elems.get(&key).map(Vec::len) == Some(1)
    }

    /// Marker of a current boundary edge (unlisted boundary edges are 0).
    pub fn boundary_marker(&self, key: EdgeKey) -> Option<u32> {
        if self.is_boundary_edge(key) {
            Some(self.boundary_marker.get(&key).copied().unwrap_or(0))
        } else {
            None
        }
    }

    /// Current boundary edges with their markers.
    pub fn boundary_edges(&self) -> impl Iterator<Item = (EdgeKey, u32)> + '_ {
        self.edge_elems.iter().filter_map(move |(&key, elems)| {
            if elems.len() == 1 {
                Some((key, self.boundary_marker.get(&key).copied().unwrap_or(0)))
            } else {
                None
            }
        })
    }

    fn refinement_edge_key(&self, id: usize) -> EdgeKey {
        let el = &self.elements[id];
        let r = el.refinement_edge;
        edge_key(el.vertices[(r + 1) % 3], el.vertices[(r + 2) % 3])
    }

    /// Bisects every marked element across its refinement edge, then
    /// recursively bisects further elements until the mesh is conforming.
    pub fn bisect(&mut self, marked: &[usize]) -> Result<RefinementReport, MeshError> {
        for &id in marked {
            if id >= self.elements.len() {
                return Err(MeshError::UnknownElement { element: id });
            }
            if !self.elements[id].active {
                return Err(MeshError::InactiveElement { element: id });
            }
        }
        let mut report = RefinementReport::default();
        for &id in marked {
            // A marked element may already have been split by the closure
            // of an earlier marked element.
            if self.elements[id].active {
                self.refine_to_conformity(id, &mut report);
            }
        }
        Ok(report)
    }

    /// Bisects every active element once (plus closure).
    pub fn uniform_refine(&mut self) -> RefinementReport {
        let all: Vec<usize> = self.active.iter().copied().collect();
        self.bisect(&all).expect("active ids are valid")
    }

    /// Newest-vertex compatibility refinement: walk the chain of
    /// incompatible neighbors, then split compatible pairs on unwind.
    fn refine_to_conformity(&mut self, start: usize, report: &mut RefinementReport) {
        let mut stack = vec![start];
        while let Some(&top) = stack.last() {
            if !self.elements[top].active {
                stack.pop();
                continue;
            }
            let key = self.refinement_edge_key(top);
            let partner = self.neighbor(top, key);
            match partner {
                Some(n) if self.refinement_edge_key(n) != key => {
                    // Incompatible neighbor: refine it first. One split
                    // leaves a child whose refinement edge is `key`.
                    assert!(
                        !stack.contains(&n),
                        "refinement-edge cycle in the initial mesh"
                    );
                    stack.push(n);
                }
                _ => {
                    self.split(top, report);
                    if let Some(n) = partner {
                        self.split(n, report);
                    }
                    stack.pop();
                }
            }
        }
    }

    fn split(&mut self, id: usize, report: &mut RefinementReport) {
        let el = self.elements[id].clone();
        let r = el.refinement_edge;
        let peak = el.vertices[r];
        let a = el.vertices[(r + 1) % 3];
        let b = el.vertices[(r + 2) % 3];
        let key = edge_key(a, b);

        let mid = match self.midpoints.get(&key) {
            Some(&m) => m,
            None => {
                let (va, vb) = (self.vertices[a], self.vertices[b]);
                let m = self.vertices.len();
                self.vertices.push(Vertex {
                    x: 0.5 * (va.x + vb.x),
                    y: 0.5 * (va.y + vb.y),
                });
                self.midpoints.insert(key, m);
                if let Some(&marker) = self.boundary_marker.get(&key) {
                    self.boundary_marker.insert(edge_key(a, m), marker);
                    self.boundary_marker.insert(edge_key(m, b), marker);
                }
                m
            }
        };

        let c1 = self.elements.len();
        let c2 = c1 + 1;
        let generation = el.generation + 1;
        // Children keep the parent's orientation; the midpoint is the
        // newest vertex, so each child's refinement edge is opposite it.
        self.elements.push(Element {
            vertices: [peak, a, mid],
            refinement_edge: 2,
            parent: Some(id),
            children: None,
            generation,
            active: true,
        });
        self.elements.push(Element {
            vertices: [peak, mid, b],
            refinement_edge: 1,
            parent: Some(id),
            children: None,
            generation,
            active: true,
        });
        self.elements[id].active = false;
        self.elements[id].children = Some([c1, c2]);
        self.active.remove(&id);
        self.active.insert(c1);
        self.active.insert(c2);

        for i in 0..3 {
            let v = el.vertices;
            self.remove_incidence(edge_key(v[(i + 1) % 3], v[(i + 2) % 3]), id);
        }
        self.add_incidence(edge_key(peak, a), c1);
        self.add_incidence(edge_key(a, mid), c1);
        self.add_incidence(edge_key(mid, peak), c1);
        self.add_incidence(edge_key(peak, mid), c2);
        self.add_incidence(edge_key(mid, b), c2);
        self.add_incidence(edge_key(b, peak), c2);

        report.created.push((c1, id));
        report.created.push((c2, id));
    }

    fn remove_incidence(&mut self, key: EdgeKey, id: usize) {
        if let Some(list) = self.edge_elems.get_mut(&key) {
            list.retain(|&e| e != id);
            if list.is_empty() {
                self.edge_elems.remove(&key);
            }
        }
    }

    fn add_incidence(&mut self, key: EdgeKey, id: usize) {
        self.edge_elems.entry(key).or_default().push(id);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const UNIT_SQUARE: &str = "\
# unit square, two triangles sharing the diagonal
4 2 4
0 0
1 0
1 1
0 1
0 1 2
0 2 3
0 1 1
1 2 1
2 3 1
3 0 1
";

    pub const L_SHAPE: &str = "\
# L-shaped domain (-1,1)^2 minus the fourth quadrant, six triangles
8 6 8
-1 -1
0 -1
-1 0
0 0
1 0
-1 1
0 1
1 1
0 1 3
0 3 2
2 3 5
3 6 5
3 4 7
3 7 6
0 1 1
1 3 1
3 4 1
4 7 1
7 6 1
6 5 1
5 2 1
2 0 1
";

    #[test]
    fn loads_unit_square() {
        let mesh = load_mesh(UNIT_SQUARE).unwrap();
        assert_eq!(mesh.n_vertices(), 4);
        assert_eq!(mesh.n_active(), 2);
        // Both triangles take the shared diagonal as refinement edge.
        assert_eq!(mesh.refinement_edge_key(0), (0, 2));
        assert_eq!(mesh.refinement_edge_key(1), (0, 2));
    }

    #[test]
    fn rejects_degenerate_triangle() {
        let doc = "3 1 0\n0 0\n1 0\n0 1\n0 1 1\n";
        assert_eq!(
            load_mesh(doc),
            Err(MeshError::InvalidTriangle { element: 0 })
        );
    }

    #[test]
    fn loads_l_shape() {
        let mesh = load_mesh(L_SHAPE).unwrap();
        assert_eq!(mesh.n_vertices(), 8);
        assert_eq!(mesh.n_active(), 6);
        assert_eq!(mesh.boundary_edges().count(), 8);
    }

    #[test]
    fn rejects_overconnected_edge() {
        let doc = "5 3 0\n0 0\n1 0\n0 1\n1 1\n-1 0.5\n0 1 2\n1 3 2\n0 2 4\n";
        // edge (0,2) belongs to triangles 0 and 2; add a third use of it
        let bad = "5 3 0\n0 0\n1 0\n0 1\n-1 0.2\n-1 0.8\n0 1 2\n0 2 3\n0 2 4\n";
        assert!(load_mesh(doc).is_ok());
        assert!(matches!(
            load_mesh(bad),
            Err(MeshError::NonConforming { .. }) | Err(MeshError::InvalidTriangle { .. })
        ));
    }

    #[test]
    fn bisects_single_triangle() {
        let mut mesh = load_mesh("3 1 3\n0 0\n1 0\n0 1\n0 1 2\n0 1 1\n1 2 1\n2 0 1\n").unwrap();
        let parent_area = mesh.element_area(0);
        let report = mesh.bisect(&[0]).unwrap();
        assert_eq!(report.created.len(), 2);
        assert!(!mesh.element(0).active);
        assert_eq!(mesh.n_active(), 2);
        for &(child, parent) in &report.created {
            assert_eq!(parent, 0);
            assert!((mesh.element_area(child) - 0.5 * parent_area).abs() < 1e-15);
        }
        // boundary markers survive the split of the hypotenuse
        assert_eq!(mesh.boundary_edges().filter(|&(_, m)| m == 1).count(), 4);
    }

    #[test]
    fn closure_bisects_neighbor() {
        let mut mesh = load_mesh(UNIT_SQUARE).unwrap();
        let report = mesh.bisect(&[0]).unwrap();
        assert_eq!(mesh.n_active(), 4);
        assert_eq!(mesh.n_vertices(), 5);
        assert_eq!(report.created.len(), 4);
    }

    #[test]
    fn empty_marking_is_identity() {
        let mut mesh = load_mesh(UNIT_SQUARE).unwrap();
        let report = mesh.bisect(&[]).unwrap();
        assert!(report.created.is_empty());
        assert_eq!(mesh.n_active(), 2);
        assert_eq!(mesh.n_vertices(), 4);
    }

    #[test]
    fn bisect_rejects_inactive_ids() {
        let mut mesh = load_mesh(UNIT_SQUARE).unwrap();
        mesh.bisect(&[0]).unwrap();
        assert_eq!(
            mesh.bisect(&[0]),
            Err(MeshError::InactiveElement { element: 0 })
        );
    }

    #[test]
    fn diameters() {
        let mesh = load_mesh("3 1 0\n0 0\n1 0\n0 1\n0 1 2\n").unwrap();
        assert!((mesh.element_diameter(0) - core::f64::consts::SQRT_2).abs() < 1e-15);

        let eq = load_mesh("3 1 0\n0 0\n2 0\n1 1.7320508075688772\n0 1 2\n").unwrap();
        assert!((eq.element_diameter(0) - 2.0).abs() < 1e-12);

        let mut mesh = load_mesh("3 1 0\n0 0\n1 0\n0 1\n0 1 2\n").unwrap();
        let report = mesh.bisect(&[0]).unwrap();
        for &(child, _) in &report.created {
            assert!((mesh.element_diameter(child) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn edge_diameters() {
        let mesh = load_mesh(UNIT_SQUARE).unwrap();
        assert_eq!(mesh.edge_diameter(0, 1), 1.0);
        assert!((mesh.edge_diameter(0, 2) - core::f64::consts::SQRT_2).abs() < 1e-15);
        let mesh2 = load_mesh("3 1 0\n0.5 0\n0.5 0.5\n0 0.25\n0 1 2\n").unwrap();
        assert_eq!(mesh2.edge_diameter(0, 1), 0.5);
    }

    #[test]
    fn uniform_refinement_counts() {
        let mut square = load_mesh(UNIT_SQUARE).unwrap();
        square.uniform_refine();
        assert_eq!(square.n_active(), 4);

        let mut tri = load_mesh("3 1 0\n0 0\n1 0\n0 1\n0 1 2\n").unwrap();
        tri.uniform_refine();
        assert_eq!(tri.n_active(), 2);
        tri.uniform_refine();
        assert_eq!(tri.n_active(), 4);
    }

    #[test]
    fn area_is_conserved() {
        let mut mesh = load_mesh(L_SHAPE).unwrap();
        let total: f64 = mesh.active_elements().map(|e| mesh.element_area(e)).sum();
        for round in 0..5 {
            let marked: Vec<usize> = mesh
                .active_elements()
                .filter(|&e| (e + round) % 3 == 0)
                .collect();
            mesh.bisect(&marked).unwrap();
            let now: f64 = mesh.active_elements().map(|e| mesh.element_area(e)).sum();
            assert!((now - total).abs() <= 1e-12 * total);
        }
    }

    #[test]
    fn genealogy_is_a_binary_forest() {
        let mut mesh = load_mesh(UNIT_SQUARE).unwrap();
        for _ in 0..3 {
            mesh.uniform_refine();
        }
        for id in 0..mesh.n_elements() {
            let el = mesh.element(id);
            match el.children {
                Some([c1, c2]) => {
                    assert!(!el.active);
                    assert_eq!(mesh.element(c1).parent, Some(id));
                    assert_eq!(mesh.element(c2).parent, Some(id));
                    assert_eq!(mesh.element(c1).generation, el.generation + 1);
                    let sum = mesh.element_area(c1) + mesh.element_area(c2);
                    let parent = mesh.element_area(id);
                    assert!((sum - parent).abs() <= 1e-12 * parent);
                }
                None => assert!(el.active),
            }
        }
    }
}
