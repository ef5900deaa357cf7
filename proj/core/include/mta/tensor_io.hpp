#pragma once

#include <iosfwd>
#include <string>

#include "mta/tensor.hpp"

namespace mta {

// Interchange format, one tensor per line/file:
// {"n":int,"k":int,"l":int,"mode":"exact"|"float",
//  "entries":[{"up":[..],"down":[..],"re":...,"im":...}]}
// Exact scalar parts are rational strings "p/q"; float parts are numbers.
std::string tensor_to_json(const MixedTensor& x);
MixedTensor tensor_from_json(const std::string& text);

void write_tensor(std::ostream& os, const MixedTensor& x);
MixedTensor read_tensor(std::istream& is);

}  // namespace mta
