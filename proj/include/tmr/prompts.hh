#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tmr
{
  struct PromptTags
  {
    std::string source = "src";
    std::string target = "trg";
  };

  struct Prompt
  {
    std::string text;
    std::size_t shots = 0;  // examples actually used
    bool complete = true;   // false when fewer than the requested shots were available
  };

  /* Few-shot translation prompt. Each example is one line
       [<src>]: <example source>. =[<trg>]: <example target>
     followed by the query line
       [<src>]: <query>. =[<trg>]:
     Lines are joined with '\n'; there is no trailing newline. At most
     `shots` examples are used, in the given order. */
  Prompt render_prompt(const std::vector<std::pair<std::string, std::string>>& examples,
                       std::string_view query,
                       std::size_t shots,
                       const PromptTags& tags = {});
}
