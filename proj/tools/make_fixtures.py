#!/usr/bin/env python3
"""Regenerate the integral fixtures under tests/data with PySCF.

Writes, for each molecule, an FCIDUMP in the canonical RHF orbital basis,
the orthogonal MO->SAO rotation (symmetric/Loewdin orthogonalized AOs)
and a small JSON file with the PySCF RHF and FCI energies that the C++
oracle is checked against.

    python3 tools/make_fixtures.py tests/data
"""
import json
import sys
from pathlib import Path

import numpy as np
from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump

SYSTEMS = {
    "h2_sto6g_0.76": "H 0 0 0; H 0 0 0.76",
    "h4_sto6g_1.0": "H 0 0 0; H 0 0 1.0; H 0 0 2.0; H 0 0 3.0",
}


def sao_rotation(mol, mo_coeff):
    # u[r][p] = <sao_r | mo_p> with sao = S^{-1/2} ao
    s = mol.intor("int1e_ovlp")
    w, v = np.linalg.eigh(s)
    s_half = v @ np.diag(np.sqrt(w)) @ v.T
    u = s_half @ mo_coeff
    assert np.allclose(u.T @ u, np.eye(u.shape[0]), atol=1e-10)
    return u


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, atoms in SYSTEMS.items():
        mol = gto.M(atom=atoms, basis="sto-6g", unit="angstrom", symmetry=False, verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        fcidump.from_scf(mf, str(out / f"{name}.fcidump"), tol=1e-15)

        norb = mf.mo_coeff.shape[1]
        h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
        eri = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), norb)
        e_fci, _ = fci.direct_spin1.kernel(h1, eri, norb, mol.nelectron,
                                           ecore=mol.energy_nuc(), conv_tol=1e-13)

        u = sao_rotation(mol, mf.mo_coeff)
        np.savetxt(out / f"{name}.sao_rotation.txt", u, fmt="%.17e")

        meta = {
            "generator": f"pyscf {__import__('pyscf').__version__}",
            "geometry_angstrom": atoms,
            "basis": "sto-6g",
            "e_rhf": mf.e_tot,
            "e_fci": e_fci,
            "e_nuc": mol.energy_nuc(),
        }
        (out / f"{name}.json").write_text(json.dumps(meta, indent=2) + "\n")
        print(name, meta)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
