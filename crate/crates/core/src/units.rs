//! Pinned physical constants and the eV / nm boundary conversions.
//!
//! Internally every length is in nm and every frequency in nm^-1 (natural
//! units with `hbar = c = 1`), so `omega z` is dimensionless.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// eV nm
    pub hbar_c: f64,
    pub alpha: f64,
    /// eV
    pub electron_mass_energy: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar_c: 197.326_980_4,
    alpha: 7.297_352_569_3e-3,
    electron_mass_energy: 510_998.95,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CONSTANTS
    }
}

impl PhysicalConstants {
    /// Photon energy in eV to angular frequency in nm^-1.
    pub fn ev_to_inv_nm(&self, energy_ev: f64) -> f64 {
        energy_ev / self.hbar_c
    }

    pub fn inv_nm_to_ev(&self, omega: f64) -> f64 {
        omega * self.hbar_c
    }

    /// Electron mass as an inverse length (inverse reduced Compton wavelength), nm^-1.
    pub fn electron_mass_inv_nm(&self) -> f64 {
        self.electron_mass_energy / self.hbar_c
    }

    /// `Delta mu / mu_B = (alpha / 2 pi) S / (m z)^2` for `z` in nm.
    pub fn relative_shift(&self, shape_factor: f64, z_nm: f64) -> f64 {
        let mz = self.electron_mass_inv_nm() * z_nm;
        self.alpha / (2.0 * std::f64::consts::PI) * shape_factor / (mz * mz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        assert!((CONSTANTS.ev_to_inv_nm(197.326_980_4) - 1.0).abs() < 1e-15);
        let omega_t_z = CONSTANTS.ev_to_inv_nm(0.003) * 30.0;
        assert!((omega_t_z - 4.561e-4).abs() < 1e-7);
        let mz = CONSTANTS.electron_mass_inv_nm() * 10.0;
        assert!((mz - 2.5896e4).abs() < 1.0);
    }

    #[test]
    fn relative_shift_of_zero_is_zero() {
        assert_eq!(CONSTANTS.relative_shift(0.0, 10.0), 0.0);
    }
}
