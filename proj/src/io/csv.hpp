/*
 * Copyright (c) 2026 aoico contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <concepts>
#include <cstdint>
#include <string>

namespace aoico {

// Fixed numeric formatting so identical runs emit identical bytes.
std::string csv_num(double v);
std::string csv_num(long long v);
std::string csv_num(int v);
std::string csv_num(std::uint64_t v);

class CsvWriter {
 public:
  explicit CsvWriter(std::string header);

  template <typename... Ts>
  void row(const Ts&... fields) {
    bool first = true;
    ((append_field(to_field(fields), first), first = false), ...);
    out_ += '\n';
  }

  const std::string& str() const { return out_; }

 private:
  static std::string to_field(const std::string& s) { return s; }
  static std::string to_field(const char* s) { return s; }
  static std::string to_field(double v) { return csv_num(v); }
  template <std::signed_integral T>
  static std::string to_field(T v) { return csv_num(static_cast<long long>(v)); }
  template <std::unsigned_integral T>
  static std::string to_field(T v) { return csv_num(static_cast<std::uint64_t>(v)); }

  void append_field(const std::string& f, bool first) {
    if (!first) out_ += ',';
    out_ += f;
  }

  std::string out_;
};

}  // namespace aoico
