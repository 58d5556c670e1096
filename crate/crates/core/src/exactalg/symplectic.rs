use num_integer::Integer;
use num_traits::Zero;


use super::{AlgError, CongruenceBuilder, CongruenceWitness, IntMatrix};

/// Symplectic basis of `j` over `Z/2`, realized by an integral unimodular transform.
///
/// On success `S · j · ᵗS ≡ ⊕ [[0,1],[1,0]] (mod 2)` with the new basis ordered
/// `x₁, y₁, …, x_p, y_p`.
pub fn symplectic_basis_mod2(j: &IntMatrix) -> Result<CongruenceWitness, AlgError> {
    let n = j.dim();
    if n % 2 == 1 {
        return Err(AlgError::OddDimension(n));
    }
    if let Some(index) = (0..n).find(|&i| j[(i, i)].is_odd()) {
        return Err(AlgError::NotAlternatingMod2 { index });
    }
    let jm = j.mod2();
    if !(0..n).all(|r| (0..r).all(|c| jm[(r, c)] == jm[(c, r)])) {
        // alternating mod 2 means symmetric mod 2 with zero diagonal
        return Err(AlgError::DegenerateMod2);
    }

    let mut b = CongruenceBuilder::new_mod2(j);
    for e in (0..n).step_by(2) {
        let f = b
            .isolate_unit_partner(e, e + 1..n)
            .ok_or(AlgError::DegenerateMod2)?;
        b.rotate_into(f, e + 1);
        let f = e + 1;
        for w in e + 2..n {
            let a = b.at(w, f).clone();
            if !a.is_zero() {
                b.add_multiple(w, e, a);
            }
            let c = b.at(w, e).clone();
            if !c.is_zero() {
                b.add_multiple(w, f, c);
            }
        }
    }
    Ok(b.finish())
}

/// Integral symplectic basis of a unimodular skew-symmetric form.
///
/// On success `S · j · ᵗS = ⊕ [[0,1],[-1,0]]` exactly. Each step takes the
/// next basis vector `e`, runs Euclid on the row `j(e, ·)` until one vector
/// `f` pairs to `1` with it, and clears `e, f` from the remaining vectors.
pub fn integral_symplectic_basis(j: &IntMatrix) -> Result<CongruenceWitness, AlgError> {
    let n = j.dim();
    if n % 2 == 1 {
        return Err(AlgError::OddDimension(n));
    }
    if !j.is_antisymmetric() {
        return Err(AlgError::NotAntisymmetric);
    }
    let mut b = CongruenceBuilder::new(j);
    for e in (0..n).step_by(2) {
        let f = b.isolate_unit_partner(e, e + 1..n).ok_or(AlgError::NotUnimodular)?;
        b.rotate_into(f, e + 1);
        let f = e + 1;
        for w in e + 2..n {
            let a = -b.at(w, f).clone();
            b.add_multiple(w, e, a);
            let c = b.at(w, e).clone();
            b.add_multiple(w, f, c);
        }
    }
    Ok(b.finish())
}
