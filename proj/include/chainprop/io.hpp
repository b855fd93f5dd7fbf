#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

#include "chainprop/quench.hpp"

namespace chainprop {

// Scientific notation with 15 digits past the point (16 significant):
// round-trips doubles to within one part in 1e15.
std::string sci(double x);

// Minimal CSV emitter: '#' metadata comments, comma-joined cells.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void comment(std::string_view key, std::string_view value);
    void cells(std::initializer_list<std::string> parts);

  private:
    std::ostream& out_;
};

// Read a source profile from CSV.  Metadata comments select the
// representation ("# kind: site|position|wavenumber") and, for sampled force
// densities, the domain length ("# length: <L>").  Data rows are label,value;
// a non-numeric header row is skipped.
SourceProfile read_source_profile(const std::string& path);

}  // namespace chainprop
