//! Random-walk approximation of the layered diffusion in the stretched
//! coordinate, where it is a Brownian motion with skew reflection at the
//! layer edges `+-sqrt(eps / kappa)`, pieced out at the origin.

use crate::analytic::{layer_edge, skewness, stretch, unstretch};
use crate::error::{invalid, require_positive, Result, SnobError};
use crate::random::RandomStream;
use crate::space::{Side, SnobParams};

/// Where the walk restarts after reaching the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rebirth {
    /// `+edge` or `-edge` with probability 1/2 each.
    Symmetric,
    /// Always `+edge`.
    AlwaysPlus,
}

/// Walk with mesh `h` and time step `h^2`. At the node `+edge` it moves
/// outward with probability `(1 + theta) / 2`, mirrored at `-edge`; everywhere
/// else it is a simple symmetric walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinLayerWalk {
    params: SnobParams,
    eps: f64,
    h: f64,
    edge_nodes: i64,
    outward: f64,
    rebirth: Rebirth,
}

/// Path record in the original coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinLayerPath {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub sides: Vec<Side>,
    pub rebirths: usize,
}

impl ThinLayerPath {
    pub fn endpoint(&self) -> f64 {
        *self.positions.last().expect("path is never empty")
    }

    pub fn endpoint_side(&self) -> Side {
        *self.sides.last().expect("path is never empty")
    }
}

impl ThinLayerWalk {
    /// `h` must divide the stretched layer half-width exactly.
    pub fn new(params: SnobParams, eps: f64, h: f64) -> Result<Self> {
        require_positive("eps", eps)?;
        require_positive("h", h)?;
        let edge = layer_edge(&params, eps);
        let ratio = edge / h;
        let nodes = ratio.round();
        if nodes < 1.0 || (ratio - nodes).abs() > 1e-9 * ratio.max(1.0) {
            return Err(SnobError::GridAlignment(format!(
                "mesh {h} does not divide the layer half-width {edge}"
            )));
        }
        Ok(Self {
            params,
            eps,
            h,
            edge_nodes: nodes as i64,
            outward: 0.5 * (1.0 + skewness(&params, eps)),
            rebirth: Rebirth::Symmetric,
        })
    }

    pub fn with_rebirth(self, rebirth: Rebirth) -> Self {
        Self { rebirth, ..self }
    }

    pub fn theta(&self) -> f64 {
        2.0 * self.outward - 1.0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn time_step(&self) -> f64 {
        self.h * self.h
    }

    pub fn edge_nodes(&self) -> i64 {
        self.edge_nodes
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn steps_for(&self, t: f64) -> Result<usize> {
        let ratio = t / self.time_step();
        let n = ratio.round();
        if (ratio - n).abs() > 1e-6 * ratio.max(1.0) {
            return Err(SnobError::GridAlignment(format!(
                "horizon {t} is not a multiple of h^2 = {}",
                self.time_step()
            )));
        }
        Ok(n as usize)
    }

    /// Nearest grid node to the stretched image of `x`.
    fn node_of(&self, x: f64) -> Result<i64> {
        if !x.is_finite() || x.abs() <= self.eps {
            return Err(invalid("x0", x, "must lie outside the layer"));
        }
        Ok((stretch(x, &self.params, self.eps) / self.h).round() as i64)
    }

    fn position(&self, node: i64) -> f64 {
        unstretch(node as f64 * self.h, &self.params, self.eps)
    }

    #[inline]
    fn move_from(&self, stream: &mut RandomStream, k: i64) -> i64 {
        let n = self.edge_nodes;
        if k == n || k == -n {
            let out = stream.uniform01() < self.outward;
            let dir = if out { k.signum() } else { -k.signum() };
            k + dir
        } else if stream.fair_coin() {
            k + 1
        } else {
            k - 1
        }
    }

    #[inline]
    fn reborn(&self, stream: &mut RandomStream) -> i64 {
        match self.rebirth {
            Rebirth::AlwaysPlus => self.edge_nodes,
            Rebirth::Symmetric => {
                if stream.fair_coin() {
                    self.edge_nodes
                } else {
                    -self.edge_nodes
                }
            }
        }
    }

    /// Runs the pieced-out walk from `x0` (original coordinate, `|x0| > eps`)
    /// until `t_end`, recording every `stride`-th step.
    pub fn run(&self, stream: &mut RandomStream, x0: f64, t_end: f64, stride: usize) -> Result<ThinLayerPath> {
        require_positive("t_end", t_end)?;
        let stride = stride.max(1);
        let n_steps = self.steps_for(t_end)?;
        let mut k = self.node_of(x0)?;
        let mut path = ThinLayerPath {
            times: vec![0.0],
            positions: vec![self.position(k)],
            sides: vec![Side::of(x0)],
            rebirths: 0,
        };
        for step in 1..=n_steps {
            k = self.move_from(stream, k);
            if k == 0 {
                k = self.reborn(stream);
                path.rebirths += 1;
            }
            if step % stride == 0 || step == n_steps {
                path.times.push(step as f64 * self.time_step());
                path.positions.push(self.position(k));
                path.sides.push(if k > 0 { Side::Plus } else { Side::Minus });
            }
        }
        Ok(path)
    }

    /// Side and original-coordinate position at `t_end`, without a record.
    pub fn endpoint(&self, stream: &mut RandomStream, x0: f64, t_end: f64) -> Result<(Side, f64)> {
        let n_steps = self.steps_for(t_end)?;
        let mut k = self.node_of(x0)?;
        for _ in 0..n_steps {
            k = self.move_from(stream, k);
            if k == 0 {
                k = self.reborn(stream);
            }
        }
        Ok((if k > 0 { Side::Plus } else { Side::Minus }, self.position(k)))
    }

    /// First time the walk started at the stretched coordinate `y0 > 0`
    /// reaches the origin, or `None` if that takes longer than `t_max`.
    pub fn first_zero_hit(&self, stream: &mut RandomStream, y0: f64, t_max: f64) -> Result<Option<f64>> {
        require_positive("y0", y0)?;
        require_positive("t_max", t_max)?;
        let mut k = (y0 / self.h).round() as i64;
        if k == 0 {
            return Err(invalid("y0", y0, "must be at least one mesh away from the origin"));
        }
        let max_steps = (t_max / self.time_step()).ceil() as u64;
        for step in 1..=max_steps {
            k = self.move_from(stream, k);
            if k == 0 {
                return Ok(Some(step as f64 * self.time_step()));
            }
        }
        Ok(None)
    }
}

/// One path of the pieced-out layered process from `x0`, recorded every step.
pub fn thinlayer_path(
    stream: &mut RandomStream,
    x0: f64,
    t_end: f64,
    params: &SnobParams,
    eps: f64,
    h: f64,
) -> Result<ThinLayerPath> {
    ThinLayerWalk::new(*params, eps, h)?.run(stream, x0, t_end, 1)
}
