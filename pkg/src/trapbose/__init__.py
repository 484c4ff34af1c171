"""Dilute trapped Bose gas: scattering, ideal gas, Gross-Pitaevskii and entropy tools."""
