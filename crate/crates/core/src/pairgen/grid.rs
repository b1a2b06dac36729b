use std::f64::consts::PI;

use crate::dispersion::DispersionModel;
use crate::error::{FwmError, Result};
use crate::phasematch::MismatchContext;

/// Number of bins that must fit across the narrowest phase-matching lobe.
pub const MIN_BINS_PER_LOBE: f64 = 16.0;
/// The grid must reach |K·L/2| of at least this many half-periods at its edges.
pub const COVERAGE_HALF_PERIODS: f64 = 9.0;
const MAX_REFINEMENT: usize = 64;
const SPAN_GROWTH: f64 = 1.1;

/// A closed interval of offsets Ω, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lobe {
    pub lo: f64,
    pub hi: f64,
}

impl Lobe {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Symmetric frequency grid about ω₀ with bin centers at ω₀ + k·Δ, |k| ≤ N.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    pub center: f64,
    pub bin_width: f64,
    pub half_bins: i64,
    /// Δω: offset of each pump from the center.
    pub pump_offset: f64,
    pub pump_linewidth: f64,
    /// Optional pass band, absolute angular frequencies.
    pub filter_band: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub index: i64,
    pub offset: f64,
    pub omega: f64,
    pub is_pump: bool,
    pub in_filter: bool,
}

impl Bin {
    pub fn included(&self) -> bool {
        !self.is_pump && self.in_filter
    }
}

impl SpectralGrid {
    pub fn new(
        center: f64,
        bin_width: f64,
        half_bins: i64,
        pump_offset: f64,
        pump_linewidth: f64,
    ) -> Result<Self> {
        if !(bin_width.is_finite() && bin_width > 0.0) {
            return Err(FwmError::Domain(format!(
                "bin width must be positive, got {bin_width}"
            )));
        }
        if half_bins < 1 {
            return Err(FwmError::Domain(
                "grid needs at least one bin either side".into(),
            ));
        }
        if center - (half_bins as f64 + 0.5) * bin_width <= 0.0 {
            return Err(FwmError::Domain(
                "grid reaches non-positive frequencies".into(),
            ));
        }
        Ok(SpectralGrid {
            center,
            bin_width,
            half_bins,
            pump_offset: pump_offset.abs(),
            pump_linewidth,
            filter_band: None,
        })
    }

    pub fn with_filter(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi && lo > 0.0) {
            return Err(FwmError::Domain(format!("bad filter band [{lo}, {hi}]")));
        }
        self.filter_band = Some((lo, hi));
        Ok(self)
    }

    /// Same span, bin width divided by `k`.
    pub fn refined(&self, k: usize) -> Self {
        SpectralGrid {
            bin_width: self.bin_width / k as f64,
            half_bins: self.half_bins * k as i64,
            ..self.clone()
        }
    }

    pub fn half_span(&self) -> f64 {
        self.half_bins as f64 * self.bin_width
    }

    pub fn len(&self) -> usize {
        (2 * self.half_bins + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn offset(&self, index: i64) -> f64 {
        index as f64 * self.bin_width
    }

    pub fn is_pump(&self, offset: f64) -> bool {
        let tol = 0.5 * self.bin_width.max(self.pump_linewidth);
        (offset.abs() - self.pump_offset).abs() <= tol
    }

    pub fn in_filter(&self, omega: f64) -> bool {
        match self.filter_band {
            Some((lo, hi)) => omega >= lo && omega <= hi,
            None => true,
        }
    }

    pub fn bin(&self, index: i64) -> Bin {
        let offset = self.offset(index);
        let omega = self.center + offset;
        Bin {
            index,
            offset,
            omega,
            is_pump: self.is_pump(offset),
            in_filter: self.in_filter(omega),
        }
    }

    pub fn bins(&self) -> impl Iterator<Item = Bin> + '_ {
        (-self.half_bins..=self.half_bins).map(move |i| self.bin(i))
    }
}

/// User overrides for grid construction.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridOptions {
    pub bin_width: Option<f64>,
    pub half_span: Option<f64>,
    pub filter_band: Option<(f64, f64)>,
}

fn phase_arg(ctx: &MismatchContext, length: f64, offset: f64) -> Result<f64> {
    Ok(0.5 * ctx.total_mismatch(offset)? * length)
}

/// Largest offset whose signal and idler both stay inside the dispersion window.
pub fn window_limit(ctx: &MismatchContext) -> f64 {
    let w = ctx.dispersion.window();
    (ctx.omega_0.value() - w.lo).min(w.hi - ctx.omega_0.value()) * (1.0 - 1e-9)
}

fn covered(ctx: &MismatchContext, length: f64, offset: f64) -> Result<bool> {
    let need = COVERAGE_HALF_PERIODS * PI;
    Ok(phase_arg(ctx, length, offset)?.abs() >= need
        && phase_arg(ctx, length, -offset)?.abs() >= need)
}

/// Smallest half-span (grown geometrically from 1.25Δω) at which the sinc²
/// envelope has decayed at both edges.
pub fn auto_half_span(ctx: &MismatchContext, length: f64) -> Result<f64> {
    let limit = window_limit(ctx);
    let mut span = if ctx.delta_omega > 0.0 {
        1.25 * ctx.delta_omega
    } else {
        1e-3 * ctx.omega_0.value()
    }
    .min(limit);
    loop {
        if covered(ctx, length, span)? {
            return Ok(span);
        }
        if span >= limit {
            return Err(FwmError::Coverage(format!(
                "|K L/2| stays below {COVERAGE_HALF_PERIODS}π out to the edge of the dispersion window (offset {span:.4e} rad/s)"
            )));
        }
        span = (span * SPAN_GROWTH).min(limit);
    }
}

/// Checks that the outermost bins sit where |K·L/2| ≥ 9π.
pub fn check_coverage(ctx: &MismatchContext, length: f64, grid: &SpectralGrid) -> Result<()> {
    let edge = grid.half_span();
    if covered(ctx, length, edge)? {
        Ok(())
    } else {
        Err(FwmError::Coverage(format!(
            "grid edge at offset {edge:.4e} rad/s has |K L/2| = {:.3} < {COVERAGE_HALF_PERIODS}π",
            phase_arg(ctx, length, edge)?.abs()
        )))
    }
}

/// Regions where |K·L/2| < π, found on a probe lattice four times finer
/// than the grid. A sign change of K between two probe points that are both
/// outside the band marks a lobe narrower than the probe step.
pub fn main_lobes(ctx: &MismatchContext, length: f64, grid: &SpectralGrid) -> Result<Vec<Lobe>> {
    let step = grid.bin_width / 4.0;
    let n = grid.half_bins * 4;
    let xs: Vec<f64> = (-n..=n).map(|j| j as f64 * step).collect();
    let args = xs
        .iter()
        .map(|&o| phase_arg(ctx, length, o))
        .collect::<Result<Vec<_>>>()?;
    let inside = |a: f64| a.abs() < PI;
    let crossing = |j: usize| {
        // |arg| passes through π between probe points j and j+1.
        let (a0, a1) = (args[j].abs(), args[j + 1].abs());
        let t = if a1 != a0 { (PI - a0) / (a1 - a0) } else { 0.5 };
        xs[j] + t.clamp(0.0, 1.0) * step
    };

    let mut lobes = Vec::new();
    let mut start: Option<f64> = None;
    for j in 0..xs.len() {
        let inn = inside(args[j]);
        match (start, inn) {
            (None, true) => start = Some(if j == 0 { xs[0] } else { crossing(j - 1) }),
            (Some(lo), false) => {
                lobes.push(Lobe {
                    lo,
                    hi: crossing(j - 1),
                });
                start = None;
            }
            _ => {}
        }
        if !inn
            && j + 1 < xs.len()
            && !inside(args[j + 1])
            && args[j].signum() != args[j + 1].signum()
        {
            let slope = (args[j + 1] - args[j]).abs() / step;
            let width = (2.0 * PI / slope).min(step);
            let mid = 0.5 * (xs[j] + xs[j + 1]);
            lobes.push(Lobe {
                lo: mid - 0.5 * width,
                hi: mid + 0.5 * width,
            });
        }
    }
    if let Some(lo) = start {
        lobes.push(Lobe {
            lo,
            hi: xs[xs.len() - 1],
        });
    }
    Ok(lobes)
}

/// Errors if the grid has fewer than 16 bins across the narrowest main lobe.
pub fn check_resolution(ctx: &MismatchContext, length: f64, grid: &SpectralGrid) -> Result<()> {
    let lobes = main_lobes(ctx, length, grid)?;
    if let Some(narrowest) = lobes.iter().map(Lobe::width).min_by(f64::total_cmp) {
        if grid.bin_width * MIN_BINS_PER_LOBE > narrowest {
            return Err(FwmError::Resolution {
                bin_width: grid.bin_width,
                lobe_width: narrowest,
            });
        }
    }
    Ok(())
}

fn base_grid(
    ctx: &MismatchContext,
    length: f64,
    linewidth: f64,
    bin_width: f64,
    opts: &GridOptions,
) -> Result<SpectralGrid> {
    let span = match opts.half_span {
        Some(s) => s,
        None => auto_half_span(ctx, length)?,
    };
    let limit = window_limit(ctx);
    let mut n = (span / bin_width).ceil().max(1.0);
    if n * bin_width > limit {
        n = (limit / bin_width).floor();
    }
    let grid = SpectralGrid::new(
        ctx.omega_0.value(),
        bin_width,
        n as i64,
        ctx.delta_omega,
        linewidth,
    )?;
    match opts.filter_band {
        Some((lo, hi)) => grid.with_filter(lo, hi),
        None => Ok(grid),
    }
}

/// Grid at the physical resolution δω_p (or the user's bin width).
pub fn display_grid(
    ctx: &MismatchContext,
    length: f64,
    linewidth: f64,
    opts: &GridOptions,
) -> Result<SpectralGrid> {
    base_grid(
        ctx,
        length,
        linewidth,
        opts.bin_width.unwrap_or(linewidth),
        opts,
    )
}

/// Grid for the bandwidth integral: δω_p/k with the smallest k that resolves
/// every main lobe. A user bin width is taken as-is and checked.
pub fn quadrature_grid(
    ctx: &MismatchContext,
    length: f64,
    linewidth: f64,
    opts: &GridOptions,
) -> Result<SpectralGrid> {
    if let Some(bw) = opts.bin_width {
        let grid = base_grid(ctx, length, linewidth, bw, opts)?;
        check_resolution(ctx, length, &grid)?;
        return Ok(grid);
    }
    let base = base_grid(ctx, length, linewidth, linewidth, opts)?;
    let mut last = None;
    for k in 1..=MAX_REFINEMENT {
        let grid = base.refined(k);
        match check_resolution(ctx, length, &grid) {
            Ok(()) => return Ok(grid),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one refinement attempted"))
}
