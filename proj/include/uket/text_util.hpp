#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace uket {

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);

// Number of UTF-8 code points; invalid lead bytes count as one each.
std::size_t utf8_length(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);
bool starts_with_ci(std::string_view s, std::string_view prefix);

// "3328920/2017" -> "3328920_2017"
std::string case_id_to_filename(std::string_view case_id);

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace uket
