//! Finite group literals ("4,2") and coordinate tuples ("2,1;0,1").

use hopfkit_core::{cyclic_sum_presentation, FiniteAbelianGroup, GroupElement, Presentation};

/// A group given as a sum of cyclic groups in the user's order, with the
/// translation to and from invariant-factor coordinates.
pub struct Literal {
    pub orders: Vec<u64>,
    pres: Presentation,
}

impl Literal {
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        let orders = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| {
                    let t = t.trim();
                    match t.parse::<u64>() {
                        Ok(0) => Err(format!(
                            "cyclic order 0 in {text:?}; only finite groups are allowed"
                        )),
                        Ok(n) => Ok(n),
                        Err(_) => Err(format!("bad cyclic order {t:?} in {text:?}")),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        let pres = cyclic_sum_presentation(&orders).map_err(|e| e.to_string())?;
        Ok(Literal { orders, pres })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.pres.group
    }

    /// Coordinates against `orders`, any integers, into the canonical group.
    pub fn project(&self, coords: &[i64]) -> GroupElement {
        self.pres.project(coords)
    }

    /// Canonical element back to coordinates against `orders`.
    pub fn lift(&self, y: &GroupElement) -> Vec<u64> {
        self.pres.lift_mod(y, &self.orders)
    }

    /// Generator `j` of the user's sum, in canonical coordinates.
    pub fn generator(&self, j: usize) -> GroupElement {
        let mut e = vec![0i64; self.orders.len()];
        e[j] = 1;
        self.project(&e)
    }

    pub fn parse_elements(&self, text: &str) -> Result<Vec<GroupElement>, String> {
        text.split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                let coords = t
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<i64>()
                            .map_err(|_| format!("bad coordinate {c:?} in {t:?}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if coords.len() != self.orders.len() {
                    return Err(format!(
                        "tuple {t:?} has {} coordinates, the group has {} cyclic summands",
                        coords.len(),
                        self.orders.len()
                    ));
                }
                Ok(self.project(&coords))
            })
            .collect()
    }
}

pub fn tuple(coords: &[u64]) -> String {
    let parts: Vec<String> = coords.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let l = Literal::parse("4,2").unwrap();
        assert_eq!(l.group().invariant_factors(), &[2, 4]);
        let y = l.parse_elements("2,1").unwrap();
        assert_eq!(l.lift(&y[0]), vec![2, 1]);
        assert_eq!(l.lift(&l.generator(0)), vec![1, 0]);
    }

    #[test]
    fn errors() {
        assert!(Literal::parse("4,0").is_err());
        assert!(Literal::parse("4,x").is_err());
        let l = Literal::parse("6").unwrap();
        assert!(l.parse_elements("1,1").is_err());
        assert_eq!(l.parse_elements("").unwrap().len(), 0);
        assert!(Literal::parse("").unwrap().group().is_trivial());
    }
}
