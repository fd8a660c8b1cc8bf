#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "maskit/moebius.hpp"

namespace maskit {

// Exit codes: 0 success, 1 verification failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

// "a+bi", "a-bi", "bi", "a" or "a,b".
cplx parse_complex(const std::string& s);
// "%.9g" parts, e.g. 1+1.41421356i.
std::string format_complex(cplx z, int digits = 9);

}  // namespace maskit
