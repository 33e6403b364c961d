#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace cooc {

/// Calls fn(line, line_number) for every non-blank line of a text file.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& fn);

/// Writes one compact JSON object per line; key order is insertion order.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  void write(const nlohmann::ordered_json& record);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Fixed six-decimal rendering used in every CSV.
std::string fixed6(double v);

std::ofstream open_output(const std::filesystem::path& path);

}  // namespace cooc
