//! Exact solvers for `1 || Σ p_j U_j`: schedule jobs on a single machine so that
//! the total processing time of tardy jobs is minimal.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure algorithms:
//!
//!  * [`model`] — jobs, instances grouped by due date, EDD evaluation and
//!    certificate checks.
//!  * [`baseline`] — exhaustive search and the Lawler–Moore `O(P·n)` dynamic
//!    program, both producing early-job certificates.
//!  * [`numseq`] — exact boolean convolution (number-theoretic transform),
//!    sumsets and subset sums.
//!  * [`maxmin`] — extended integers and `(max,min)`-convolution.
//!  * [`skewed`] — `(max,min)`-skewed convolution `C[k] = max_{i+j=k} min(A[i], B[j]+k)`
//!    computed level by level from coarse to fine approximations.
//!  * [`sched`] — the sumset-based scheduler, the skewed-convolution scheduler
//!    and a cost-model dispatcher.
//!
//! ```
//! use tardy_core::model::{Job, JobInstance};
//! use tardy_core::sched::{conv_scheduler, sumset_scheduler};
//!
//! let inst = JobInstance::new(vec![Job::new(2, 2), Job::new(2, 2), Job::new(3, 7)]).unwrap();
//! assert_eq!(sumset_scheduler(&inst).objective, 2);
//! assert_eq!(conv_scheduler(&inst).objective, 2);
//! ```
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baseline;
pub mod maxmin;
pub mod model;
pub mod numseq;
pub mod sched;
pub mod skewed;

mod bitset;
mod ntt;

pub use maxmin::{ExtInt, ExtVec};
pub use model::{Algorithm, Job, JobInstance, ScheduleResult};
