use super::{Flag, Hypotheses, IsometricAction};
use crate::boundary::ReducedWord;
use crate::num::Scalar;
use crate::observers::{Multipod, PodPoint};

/// `F_N` acting on a finite multipod by rotating its arms: generator `k`
/// sends arm `i` to arm `i + shifts[k-1] (mod arms)`.
///
/// Every element fixes the hub, so all translation lengths vanish.
#[derive(Clone, Debug)]
pub struct PodRotation<S> {
    pod: Multipod<S>,
    arms: usize,
    shifts: Vec<usize>,
}

impl<S: Scalar> PodRotation<S> {
    pub fn new(arms: usize, shifts: Vec<usize>) -> Self {
        PodRotation { pod: Multipod::new(arms), arms, shifts }
    }

    fn shift(&self, w: &ReducedWord) -> usize {
        let n = self.arms as i64;
        let s: i64 = w
            .letters()
            .iter()
            .map(|l| {
                let k = self.shifts[l.index() - 1] as i64;
                if l.is_inverse() {
                    -k
                } else {
                    k
                }
            })
            .sum();
        s.rem_euclid(n) as usize
    }
}

impl<S: Scalar> IsometricAction for PodRotation<S> {
    type Oracle = Multipod<S>;

    fn oracle(&self) -> &Multipod<S> {
        &self.pod
    }

    fn rank(&self) -> usize {
        self.shifts.len()
    }

    fn apply(&self, w: &ReducedWord, p: &PodPoint<S>) -> PodPoint<S> {
        match p {
            PodPoint::Hub => PodPoint::Hub,
            PodPoint::Arm { arm, offset } => PodPoint::Arm { arm: (arm + self.shift(w)) % self.arms, offset: offset.clone() },
        }
    }

    /// The tip of arm 0.
    fn basepoint(&self) -> PodPoint<S> {
        self.pod.point(0, S::one())
    }

    fn hypotheses(&self) -> Hypotheses {
        Hypotheses { very_small: Flag::Fails, dense_orbits: Flag::Fails, note: "global fixed point; orbits are finite" }
    }
}
