#include "cooc/jsonl.hpp"

#include <fmt/format.h>

#include "cooc/error.hpp"

namespace cooc {

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line, n);
  }
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : path_(path), out_(open_output(path)) {}

void JsonlWriter::write(const nlohmann::ordered_json& record) {
  out_ << record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  if (!out_) throw UsageError("write failed: " + path_.string());
}

std::string fixed6(double v) { return fmt::format("{:.6f}", v); }

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  return out;
}

}  // namespace cooc
