// editnet/config_file.h

// Copyright 2026  The editnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EDITNET_CONFIG_FILE_H_
#define EDITNET_CONFIG_FILE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace editnet {

// Flat "key=value" text, one pair per line.  Blank lines and lines starting
// with '#' are ignored; whitespace around keys and values is trimmed.
// Duplicate keys and lines without '=' throw UsageError.
std::map<std::string, std::string> ParseKeyValues(std::string_view text,
                                                  std::string_view context);

// Typed accessors that throw UsageError naming the key on a bad value.
double ParseDouble(std::string_view key, const std::string& value);
std::int64_t ParseInt(std::string_view key, const std::string& value);
std::uint64_t ParseUint(std::string_view key, const std::string& value);
bool ParseBool(std::string_view key, const std::string& value);

// Shortest text that parses back to exactly the same double.
std::string FormatDouble(double v);

}  // namespace editnet

#endif  // EDITNET_CONFIG_FILE_H_
