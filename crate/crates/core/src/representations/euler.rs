use num_rational::Ratio;

use crate::error::{Error, Result};

use super::turnover::TurnoverSignature;

/// A closed orientable 2-orbifold: genus plus cone orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbifoldData {
    pub genus: u32,
    pub cones: Vec<u32>,
}

impl OrbifoldData {
    pub fn turnover(sig: &TurnoverSignature) -> Self {
        Self { genus: 0, cones: sig.orders().to_vec() }
    }

    pub fn surface(genus: u32) -> Self {
        Self { genus, cones: vec![] }
    }

    /// S^2(2,2,2,2,2), the quotient for H5.
    pub fn h5() -> Self {
        Self { genus: 0, cones: vec![2; 5] }
    }
}

/// chi together with a flag set when chi >= 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbifoldEuler {
    pub chi: Ratio<i64>,
    pub non_hyperbolic: bool,
}

/// 2 - 2g - sum (1 - 1/n).
pub fn orbifold_euler_data(o: &OrbifoldData) -> Result<OrbifoldEuler> {
    let mut chi = Ratio::from_integer(2 - 2 * o.genus as i64);
    for &n in o.cones.iter() {
        if n < 2 {
            return Err(Error::Degenerate(format!("cone order {n}")));
        }
        chi -= Ratio::new(n as i64 - 1, n as i64);
    }
    Ok(OrbifoldEuler { chi, non_hyperbolic: chi >= Ratio::from_integer(0) })
}

pub fn orbifold_euler(sig: &TurnoverSignature) -> Ratio<i64> {
    orbifold_euler_data(&OrbifoldData::turnover(sig)).expect("orders >= 2").chi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_values() {
        let s = TurnoverSignature::new(3, 3, 4).unwrap();
        assert_eq!(orbifold_euler(&s), Ratio::new(-1, 12));
        let s = TurnoverSignature::new(2, 3, 7).unwrap();
        assert_eq!(orbifold_euler(&s), Ratio::new(-1, 42));
        assert_eq!(orbifold_euler_data(&OrbifoldData::surface(2)).unwrap().chi, Ratio::from_integer(-2));
        assert_eq!(orbifold_euler_data(&OrbifoldData::h5()).unwrap().chi, Ratio::new(-1, 2));
        let flat = orbifold_euler_data(&OrbifoldData { genus: 0, cones: vec![2, 3, 6] }).unwrap();
        assert!(flat.non_hyperbolic);
    }
}
