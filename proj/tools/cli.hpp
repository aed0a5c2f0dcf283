#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace negadrift::cli {

/// Runs one command line (program name excluded). Records go to `out`,
/// error records to `err`. Returns 0 on success, 2 on usage, schema or
/// precondition errors, 1 on internal errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace negadrift::cli
