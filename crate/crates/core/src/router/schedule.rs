use crate::error::{Error, Result};
use crate::operator::Operator;

/// Tolerance for contiguity of window boundaries, relative to the total time.
const BOUNDARY_TOL: f64 = 1e-12;

/// Diagonal term active on `[t_start, t_end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleWindow {
    pub t_start: f64,
    pub t_end: f64,
    pub term: Operator,
}

impl ScheduleWindow {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Piecewise-constant diagonal Hamiltonian. Windows are contiguous and
/// cover `[0, total_time]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetuningSchedule {
    windows: Vec<ScheduleWindow>,
}

impl DetuningSchedule {
    pub fn new(windows: Vec<ScheduleWindow>) -> Result<Self> {
        let total = windows.last().map_or(0.0, |w| w.t_end);
        let tol = BOUNDARY_TOL * total.abs().max(1.0);
        let mut expected_start = 0.0;
        for (k, w) in windows.iter().enumerate() {
            if !(w.t_end > w.t_start) || !w.t_end.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "window {k} has non-positive duration [{}, {})",
                    w.t_start, w.t_end
                )));
            }
            if (w.t_start - expected_start).abs() > tol {
                return Err(Error::InvalidParameter(format!(
                    "window {k} starts at {} but the previous one ends at {expected_start}",
                    w.t_start
                )));
            }
            if !w.term.is_diagonal(1e-12) {
                return Err(Error::InvalidParameter(format!("window {k} term is not diagonal")));
            }
            if w.term.register() != windows[0].term.register() {
                return Err(Error::Label(format!("window {k} lives on a different register")));
            }
            expected_start = w.t_end;
        }
        Ok(Self { windows })
    }

    /// Schedule with no windows.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn windows(&self) -> &[ScheduleWindow] {
        &self.windows
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn total_time(&self) -> f64 {
        self.windows.last().map_or(0.0, |w| w.t_end)
    }

    /// Term active at time `t`; `None` outside the schedule.
    pub fn term_at(&self, t: f64) -> Option<&Operator> {
        self.windows
            .iter()
            .find(|w| t >= w.t_start && t < w.t_end)
            .map(|w| &w.term)
    }
}
