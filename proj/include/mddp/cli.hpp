/*
 Copyright 2026 The mddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef MDDP_CLI_HPP
#define MDDP_CLI_HPP

#include <ostream>

namespace mddp
{

/// Exit codes: 0 success, 1 runtime failure, 2 usage error.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace mddp

#endif // MDDP_CLI_HPP
