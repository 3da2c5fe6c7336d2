#ifndef WQED_IO_HPP
#define WQED_IO_HPP

#include <cstdint>
#include <string>

namespace wqed {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit, hex string; used as the config hash in output metadata.
std::string fnv1a_hex(const std::string& text);

}  // namespace wqed

#endif
