//! Models shipped with the crate, used by tests and the examples in the README.

/// The car rental formula list: three parameters, two interface inputs,
/// four intermediates and one interface output.
pub const CAR_RENTAL: &str = include_str!("../fixtures/car_rental.ssmi");

/// The same rental cost computed by one formula that mixes operators.
pub const EXTREME: &str = include_str!("../fixtures/extreme.ssmi");

/// Car rental split into a Distance and a Rental sub-model.
pub const CAR_RENTAL_SPLIT: &str = include_str!("../fixtures/car_rental_split.ssmi");
