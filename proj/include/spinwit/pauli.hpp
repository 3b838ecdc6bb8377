#pragma once

// Pauli algebra on the N-qubit register.  Single-site Paulis act as signed
// permutations of basis indices, so left-multiplication costs O(dim^2) row
// operations instead of a dense matmul; the Fisher kernels depend on that.

#include "spinwit/common.hpp"

namespace spinwit {

enum Axis : int { kX = 0, kY = 1, kZ = 2 };

const Eigen::Matrix2cd& pauli_matrix(int axis);

// Bit mask selecting `site` (1-based, site 1 = most significant bit).
inline int site_mask(int num_qubits, int site) { return 1 << (num_qubits - site); }

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b);

// I ⊗ ... ⊗ op (at `site`) ⊗ ... ⊗ I as a dense matrix.
MatrixXcd embed_site(int num_qubits, int site, const Eigen::Matrix2cd& op);

// out = sigma_site^axis * in, shapes preserved.  out must not alias in.
void apply_pauli_left(int axis, int site, int num_qubits, const MatrixXcd& in,
                      MatrixXcd& out);

// Tr(sigma_site^axis * M) in O(dim).
cxd trace_pauli_times(int axis, int site, int num_qubits, const MatrixXcd& M);

// Tr(sigma_i^alpha * sigma_j^beta * M) in O(dim); (i,alpha) may equal (j,beta).
cxd trace_pauli_pair_times(int axis_a, int site_a, int axis_b, int site_b,
                           int num_qubits, const MatrixXcd& M);

}  // namespace spinwit
