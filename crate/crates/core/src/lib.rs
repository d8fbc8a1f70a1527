//! Theta characteristics, the symplectic group over F₂, Göpel systems, theta
//! functions and the quartic forms built from them in genus 2 and 3.

pub mod characteristics;
pub mod error;
pub mod gopel;
pub mod linalg;
pub mod modular;
pub mod points;
pub mod quartic;
pub mod scalar;
pub mod symplectic;
pub mod theta;

pub use characteristics::{Characteristic, CharacteristicSet, ParityFilter, Sign};
pub use error::{Error, Result};
pub use scalar::{Real, Ring};
pub use symplectic::SymplecticMatF2;

pub use gopel::{FanoFamily, GopelKind, GopelSystem, PascalFamily};
pub use quartic::{Evaluation, ModularGenerator, QuarticLabel};
pub use theta::{PeriodMatrix, PhasePoint, ThetaEngine};

pub type PeriodMatrix64 = PeriodMatrix<f64>;
pub type PhasePoint64 = PhasePoint<f64>;
pub type ThetaEngine64 = ThetaEngine<f64>;
pub type ThetaConstants64 = modular::ThetaConstants<f64>;
pub type PeriodMatrix32 = PeriodMatrix<f32>;
pub type PhasePoint32 = PhasePoint<f32>;
pub type ThetaEngine32 = ThetaEngine<f32>;
