//! The cyclic grid world: one object on an `N × N` torus with `N` colours.
//!
//! States `(x, y, c)` are indexed lexicographically, `(x·N + y)·N + c`. The
//! symmetry group `C_N × C_N × C_N` uses the same indexing for its elements,
//! so element `(dx, dy, dc)` has index `(dx·N + dy)·N + dc`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::action::{FiniteAction, ProductStructure};
use crate::certify::RepresentationTable;
use crate::group::{
    cyclic_group, direct_product, DirectProductDecomposition, FiniteGroup, Subgroup,
};
use crate::linalg::{RMatrix, C64};
use crate::rep::{validate_real_representation, LinearRepresentation, DEFAULT_TOL_REP};

pub const DEFAULT_CELL_PIXELS: usize = 8;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum WorldError {
    #[error("grid size must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error("cell size must be positive")]
    ZeroCellSize,
    #[error("palette must have {expected} strictly increasing entries")]
    BadPalette { expected: usize },
    #[error("state ({x}, {y}, {c}) is outside a grid of size {n}")]
    StateOutOfRange {
        x: usize,
        y: usize,
        c: usize,
        n: usize,
    },
    #[error("embedding scales must be nonzero")]
    ZeroScale,
}

/// Grid size, cell size in pixels, and grey level per colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridWorldSpec {
    n: usize,
    cell_pixels: usize,
    palette: Vec<u8>,
}

impl GridWorldSpec {
    /// Default palette `round(255·(c+1)/N)` and 8-pixel cells.
    pub fn new(n: usize) -> Result<Self, WorldError> {
        Self::with_cell_pixels(n, DEFAULT_CELL_PIXELS)
    }

    pub fn with_cell_pixels(n: usize, cell_pixels: usize) -> Result<Self, WorldError> {
        if n < 2 {
            return Err(WorldError::GridTooSmall(n));
        }
        // round half up, in integers
        let palette = (0..n)
            .map(|c| ((510 * (c + 1) + n) / (2 * n)) as u8)
            .collect();
        Self::with_palette(n, cell_pixels, palette)
    }

    pub fn with_palette(
        n: usize,
        cell_pixels: usize,
        palette: Vec<u8>,
    ) -> Result<Self, WorldError> {
        if n < 2 {
            return Err(WorldError::GridTooSmall(n));
        }
        if cell_pixels == 0 {
            return Err(WorldError::ZeroCellSize);
        }
        if palette.len() != n || palette.windows(2).any(|w| w[0] >= w[1]) || palette[0] == 0 {
            return Err(WorldError::BadPalette { expected: n });
        }
        Ok(GridWorldSpec {
            n,
            cell_pixels,
            palette,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cell_pixels(&self) -> usize {
        self.cell_pixels
    }

    pub fn palette(&self) -> &[u8] {
        &self.palette
    }

    pub fn state_count(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Image side length in pixels.
    pub fn side(&self) -> usize {
        self.n * self.cell_pixels
    }

    pub fn state(&self, x: usize, y: usize, c: usize) -> Result<WorldState, WorldError> {
        let n = self.n;
        if x >= n || y >= n || c >= n {
            return Err(WorldError::StateOutOfRange { x, y, c, n });
        }
        Ok(WorldState { x, y, c })
    }

    pub fn states(&self) -> impl Iterator<Item = WorldState> + '_ {
        (0..self.state_count()).map(|i| WorldState::from_index(self.n, i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldState {
    pub x: usize,
    pub y: usize,
    pub c: usize,
}

impl WorldState {
    pub fn index(&self, n: usize) -> usize {
        (self.x * n + self.y) * n + self.c
    }

    pub fn from_index(n: usize, i: usize) -> Self {
        WorldState {
            x: i / (n * n),
            y: (i / n) % n,
            c: i % n,
        }
    }
}

/// Group element `(dx, dy, dc)` for an element index.
pub fn element_offsets(n: usize, g: usize) -> (usize, usize, usize) {
    let s = WorldState::from_index(n, g);
    (s.x, s.y, s.c)
}

pub fn element_index(n: usize, dx: usize, dy: usize, dc: usize) -> usize {
    ((dx % n) * n + dy % n) * n + dc % n
}

/// Componentwise addition modulo `N`.
pub fn apply_world_action(spec: &GridWorldSpec, g: usize, w: WorldState) -> WorldState {
    let n = spec.n;
    let (dx, dy, dc) = element_offsets(n, g);
    WorldState {
        x: (w.x + dx) % n,
        y: (w.y + dy) % n,
        c: (w.c + dc) % n,
    }
}

/// The symmetry group of the grid world with its three-factor decomposition
/// and its action on state indices.
#[derive(Clone, Debug)]
pub struct GridWorld {
    pub spec: GridWorldSpec,
    pub group: FiniteGroup,
    /// `G_x × G_y × G_c`.
    pub decomposition: DirectProductDecomposition,
    pub action: FiniteAction,
}

impl GridWorld {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// The generators `g_x`, `g_y`, `g_c`.
    pub fn generators(&self) -> [usize; 3] {
        let n = self.n();
        [
            element_index(n, 1, 0, 0),
            element_index(n, 0, 1, 0),
            element_index(n, 0, 0, 1),
        ]
    }

    /// `G_p × G_c` with `G_p` all translations.
    pub fn position_colour_decomposition(&self) -> DirectProductDecomposition {
        let n = self.n();
        let position: Vec<usize> = (0..n * n).map(|p| p * n).collect();
        let colour: Vec<usize> = (0..n).collect();
        DirectProductDecomposition::new(
            &self.group,
            vec![
                Subgroup::new(&self.group, position).expect("translations form a subgroup"),
                Subgroup::new(&self.group, colour).expect("colour shifts form a subgroup"),
            ],
        )
        .expect("position and colour commute")
    }

    /// The lexicographic coder `X = X_x × X_y × X_c`.
    pub fn product_structure(&self) -> ProductStructure {
        ProductStructure::lexicographic(vec![self.n(); 3])
    }

    pub fn canonical_representation(&self) -> LinearRepresentation {
        let n = self.n();
        let mats: Vec<RMatrix> = self
            .group
            .elements()
            .map(|g| canonical_linear_action(n, g))
            .collect();
        validate_real_representation(&self.group, &mats, DEFAULT_TOL_REP)
            .expect("block rotations form a representation")
    }
}

pub fn world_group(spec: &GridWorldSpec) -> GridWorld {
    let n = spec.n;
    let cn = cyclic_group(n).expect("n ≥ 2");
    let group = direct_product(&direct_product(&cn, &cn), &cn);
    let axis = |step: usize| -> Subgroup {
        Subgroup::new(&group, (0..n).map(|k| k * step).collect()).expect("cyclic axis")
    };
    let decomposition =
        DirectProductDecomposition::new(&group, vec![axis(n * n), axis(n), axis(1)])
            .expect("axes form a direct product");
    let m = spec.state_count();
    let mut table = Vec::with_capacity(group.order() * m);
    for g in group.elements() {
        for w in 0..m {
            table.push(apply_world_action(spec, g, WorldState::from_index(n, w)).index(n));
        }
    }
    let action = FiniteAction::from_trusted(group.clone(), m, table);
    GridWorld {
        spec: spec.clone(),
        group,
        decomposition,
        action,
    }
}

/// A rendered greyscale image, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

/// Black background with cell `(x, y)` filled at `palette[c]`; `x` indexes
/// columns and `y` rows, `(0, 0)` at the top left.
pub fn render(spec: &GridWorldSpec, w: WorldState) -> Observation {
    let side = spec.side();
    let cp = spec.cell_pixels;
    let mut pixels = vec![0u8; side * side];
    let shade = spec.palette[w.c];
    for row in w.y * cp..(w.y + 1) * cp {
        pixels[row * side + w.x * cp..row * side + (w.x + 1) * cp].fill(shade);
    }
    Observation {
        width: side,
        height: side,
        pixels,
    }
}

/// `(e^{2πix/N}, e^{2πiy/N}, e^{2πic/N})`.
pub fn canonical_embedding(n: usize, w: WorldState) -> [C64; 3] {
    let phase = |k: usize| {
        let a = TAU * k as f64 / n as f64;
        C64::new(libm::cos(a), libm::sin(a))
    };
    [phase(w.x), phase(w.y), phase(w.c)]
}

/// [`canonical_embedding`] as `(Re, Im)` pairs per coordinate.
pub fn canonical_embedding_real(n: usize, w: WorldState) -> [f64; 6] {
    let z = canonical_embedding(n, w);
    [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im]
}

fn rotation(n: usize, k: usize) -> [f64; 4] {
    let a = TAU * (k % n) as f64 / n as f64;
    let (c, s) = (libm::cos(a), libm::sin(a));
    [c, -s, s, c]
}

/// Block-diagonal 2×2 rotations by `2π·dx/N`, `2π·dy/N`, `2π·dc/N`.
pub fn canonical_linear_action(n: usize, g: usize) -> RMatrix {
    let (dx, dy, dc) = element_offsets(n, g);
    let mut m = RMatrix::zeros(6, 6);
    for (block, k) in [dx, dy, dc].into_iter().enumerate() {
        let r = rotation(n, k);
        let o = 2 * block;
        m[(o, o)] = r[0];
        m[(o, o + 1)] = r[1];
        m[(o + 1, o)] = r[2];
        m[(o + 1, o + 1)] = r[3];
    }
    m
}

/// `(λ_x·x, λ_y·y, λ_c·c)`.
pub fn coordinate_embedding(w: WorldState, scales: [f64; 3]) -> Result<[f64; 3], WorldError> {
    if scales.contains(&0.0) {
        return Err(WorldError::ZeroScale);
    }
    Ok([
        scales[0] * w.x as f64,
        scales[1] * w.y as f64,
        scales[2] * w.c as f64,
    ])
}

pub fn canonical_table(spec: &GridWorldSpec) -> RepresentationTable {
    let rows = spec
        .states()
        .map(|w| canonical_embedding_real(spec.n, w).to_vec())
        .collect();
    RepresentationTable::new(rows).expect("finite rows")
}

pub fn coordinate_table(
    spec: &GridWorldSpec,
    scales: [f64; 3],
) -> Result<RepresentationTable, WorldError> {
    let rows = spec
        .states()
        .map(|w| coordinate_embedding(w, scales).map(|v| v.to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RepresentationTable::new(rows).expect("finite rows"))
}

/// Which pair of axes a [`mixed_phase_table`] entangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixedAxes {
    /// Position `x` with colour `c`.
    PositionColour,
    /// The two position axes `x` and `y`.
    PositionPosition,
}

/// Canonical embedding with the phase lattice of two axes rotated by 45°
/// (scaled onto the integer lattice): the two planes carry
/// `e^{2πi(a+b)/N}` and `e^{2πi(b−a)/N}` instead of `e^{2πia/N}` and
/// `e^{2πib/N}`. Each of those planes is moved by both axes' generators.
pub fn mixed_phase_table(spec: &GridWorldSpec, axes: MixedAxes) -> RepresentationTable {
    let n = spec.n;
    let phase = |k: isize| {
        let k = k.rem_euclid(n as isize) as usize;
        let a = TAU * k as f64 / n as f64;
        [libm::cos(a), libm::sin(a)]
    };
    let rows = spec
        .states()
        .map(|w| {
            let (x, y, c) = (w.x as isize, w.y as isize, w.c as isize);
            let planes = match axes {
                MixedAxes::PositionColour => [phase(x + c), phase(y), phase(c - x)],
                MixedAxes::PositionPosition => [phase(x + y), phase(y - x), phase(c)],
            };
            planes.iter().flatten().copied().collect()
        })
        .collect();
    RepresentationTable::new(rows).expect("finite rows")
}
