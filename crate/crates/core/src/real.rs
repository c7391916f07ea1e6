//! Floating-point scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Extended-real scalar backing all lattice arithmetic: `f32` or `f64`.
///
/// Besides the usual float operations this exposes single-ulp stepping,
/// which the residuation routines use to return the largest representable
/// solution of `a ⊛ v ≤ w`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Smallest representable value strictly greater than `self`.
    fn step_up(self) -> Self;
    /// Largest representable value strictly smaller than `self`.
    fn step_down(self) -> Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

macro_rules! impl_real {
    ($t:ty, $bits:ty) => {
        impl Real for $t {
            fn step_up(self) -> Self {
                if self.is_nan() || self == <$t>::INFINITY {
                    return self;
                }
                if self == 0.0 {
                    return <$t>::from_bits(1);
                }
                let bits = self.to_bits();
                if self > 0.0 {
                    <$t>::from_bits(bits + 1)
                } else {
                    <$t>::from_bits(bits - 1)
                }
            }

            fn step_down(self) -> Self {
                -(-self).step_up()
            }
        }
    };
}

impl_real!(f32, u32);
impl_real!(f64, u64);
