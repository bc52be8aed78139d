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

#include "mddp/common.hpp"

namespace mddp
{

namespace
{
std::string withTimestep(const std::string &what, std::optional<int> timestep)
{
    if (!timestep)
        return what;
    return what + " (timestep " + std::to_string(*timestep) + ")";
}
} // namespace

NumericError::NumericError(const std::string &what, std::optional<int> timestep)
    : Error(withTimestep(what, timestep)), timestep_(timestep)
{
}

RegularizationError::RegularizationError(const std::string &what, int timestep)
    : Error(withTimestep(what, timestep)), timestep_(timestep)
{
}

namespace
{
std::string config_location(const std::string &source, int line)
{
    std::string where = source;
    if (line > 0)
        where += (where.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? where : where + ": ";
}
} // namespace

ConfigError::ConfigError(const std::string &message, int line, const std::string &source)
    : Error(config_location(source, line) + message), message_(message), line_(line), source_(source)
{
}

} // namespace mddp
