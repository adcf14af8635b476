#ifndef QES_TOOLS_REPORT_FORMAT_HPP
#define QES_TOOLS_REPORT_FORMAT_HPP

#include <ostream>
#include <string>

#include <json.hpp>

namespace qes::cli {

using Json = nlohmann::ordered_json;

/// 15 significant digits, lowercase scientific notation ("1.00000000000000e+00").
/// Non-finite values print as "nan", "inf" or "-inf".
std::string format_number(double value);

/// Serializes `doc` on one line per top-level key with numbers rendered by
/// format_number; non-finite numbers become null. Output ends with "\n".
void write_json(std::ostream& out, const Json& doc);

} // namespace qes::cli

#endif
