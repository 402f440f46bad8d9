#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcsp/structure.hpp"

namespace qcsp {

// Signature with a single binary relation E.
Signature graph_signature();

// K_i, or the reflexive clique K*_i when `reflexive` is set.
Structure clique(int i, bool reflexive = false);
// P_alpha: path on [n] with a loop at i whenever alpha[i] = '1'.
Structure path(const std::string& alpha);
// U_i = A_k \ {i} on domain [k], signature U1..Uk.
Structure a_k_unary(int k);
// Two elements {0,1} with 1 in every U_i: the unary target.
Structure b_k_unary(int k);
// Directed k-cycle over <E,U>, every vertex except vertex 1 in U.
Structure a_k_cycle(int k);
// {0,1} with E = {(0,0),(1,1)} and U = {1}: the cycle target.
Structure b_cycle();
// DP*_1: {1,2} with edges (1,1), (1,2), (2,2).
Structure dp1_star();
// ([m]; <=) as a digraph.
Structure linear_order(int m);
// {0,1} with edges (0,1), (1,0), (1,1).
Structure p01();
// K_4 minus the edge {0,3}.
Structure h2();
// The one-element loop.
Structure k1s();
// n isolated vertices.
Structure edgeless(int n);
// Undirected n-cycle (symmetric edges), n >= 3.
Structure cycle(int n);
// Directed n-cycle, n >= 1.
Structure directed_cycle(int n);
// Complete bipartite K_{p,q}, symmetric edges.
Structure complete_bipartite(int p, int q);

// Named dispatch used by the command line. Parameters are family specific:
//   clique: i, reflexive (0/1)     path: alpha (string)
//   a_k_unary, b_k_unary, a_k_cycle: k
//   linear_order: m               edgeless, cycle, directed_cycle: n
//   complete_bipartite: p, q
Structure generate(const std::string& family,
                   const std::map<std::string, std::string>& params = {});

std::vector<std::string> generator_families();

}  // namespace qcsp
