#ifndef UMAP_CLI_HPP
#define UMAP_CLI_HPP

#include <iosfwd>
#include <string>

#include "umap/ncpoly.hpp"

namespace umap::cli {

// Exit codes: 0 success, 1 usage or input error, 2 an identity or statistical check failed.
// {"terms":[{"coeff":[re,im],"word":["a1","u1",...]}]}; coefficients are exact rationals written
// as strings ("1/2"), and integers are also accepted on input.
std::string poly_to_json(const Poly& P);
Poly poly_from_json(const std::string& text);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace umap::cli

#endif
