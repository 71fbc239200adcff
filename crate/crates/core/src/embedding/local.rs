use crate::domain::ShortcutPoint;
use crate::whitney::DyadicCube;

/// The localization map of one Whitney cube: a Lipschitz cutoff times the
/// affine chart `x -> (x - c, l)`, sending the boundary point to zero.
#[derive(Clone, Debug)]
pub struct LocalMap {
    cube: DyadicCube,
    lower: Vec<f64>,
    upper: Vec<f64>,
    center: Vec<f64>,
    side: f64,
}

impl LocalMap {
    pub fn new(cube: &DyadicCube) -> Self {
        Self {
            lower: cube.lower(),
            upper: cube.upper(),
            center: cube.center(),
            side: cube.side(),
            cube: cube.clone(),
        }
    }

    pub fn cube(&self) -> &DyadicCube {
        &self.cube
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    /// Output dimension, `n + 1`.
    pub fn output_dim(&self) -> usize {
        self.center.len() + 1
    }

    /// Euclidean distance from `x` to the cube.
    pub fn dist_to_cube(&self, x: &[f64]) -> f64 {
        crate::domain::dist_point_to_box(x, &self.lower, &self.upper)
    }

    /// Distance from `x` to the closed neighbourhood `B(Q, r)`.
    pub fn dist_to_neighbourhood(&self, x: &[f64], r: f64) -> f64 {
        (self.dist_to_cube(x) - r).max(0.0)
    }

    /// 1 on `B(Q, l/8)`, 0 outside `B(Q, l/4)`, linear in between.
    pub fn eta(&self, x: &[f64]) -> f64 {
        let l = self.side;
        (1.0 - self.dist_to_neighbourhood(x, l / 8.0) * 8.0 / l).max(0.0)
    }

    pub fn lambda_point(&self, x: &[f64]) -> Vec<f64> {
        let eta = self.eta(x);
        let mut out = vec![0.0; self.output_dim()];
        if eta == 0.0 {
            return out;
        }
        for (o, (v, c)) in out.iter_mut().zip(x.iter().zip(&self.center)) {
            *o = eta * (v - c);
        }
        out[self.center.len()] = eta * self.side;
        out
    }

    pub fn lambda(&self, a: &ShortcutPoint) -> Vec<f64> {
        match a {
            ShortcutPoint::Interior(x) => self.lambda_point(x),
            ShortcutPoint::Boundary => vec![0.0; self.output_dim()],
        }
    }

    /// Pushforward of a tuple, in canonical (lexicographic) order.
    pub fn phi_star(&self, p: &[ShortcutPoint]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = p.iter().map(|a| self.lambda(a)).collect();
        out.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        out
    }
}
