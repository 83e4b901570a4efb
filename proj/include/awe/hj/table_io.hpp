// Copyright 2026 The awe-reach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AWE_HJ_TABLE_IO_HPP_
#define AWE_HJ_TABLE_IO_HPP_

#include <cstdint>
#include <string>

#include "awe/hj/value_function.hpp"

namespace awe::hj {

// Binary table files, little-endian:
//   magic (7 bytes): "AWEVF01" for value files, "AWECT01" for control files
//   u32 version (= 1)
//   u32 ndim
//   per axis: u64 n, f64 min, f64 max, u8 periodic
//   payload: f64, row-major, last axis fastest
//            (value file: one field; control file: alpha field then mu field)
//   u32 CRC-32 (IEEE) of the payload bytes
//
// Loaders validate the magic, version, axis sanity, exact file size, and the
// checksum; any mismatch throws std::runtime_error and nothing is returned.

void save_value_function(const std::string& path, const ValueFunction& v);
ValueFunction load_value_function(const std::string& path);

void save_control_table(const std::string& path, const ControlTable& t);
ControlTable load_control_table(const std::string& path);

// CRC-32 (IEEE, reflected) used for the payload checksum.
uint32_t crc32_ieee(const void* data, std::size_t len);

// Expected on-disk size of a file with this grid and field count.
std::size_t table_file_size(const Grid& grid, int fields);

}  // namespace awe::hj

#endif  // AWE_HJ_TABLE_IO_HPP_
