#include "cyclelab.h"
#include <stdio.h>
int main(void) {
  CyclelabGroup *g = NULL;
  if (cyclelab_group_from_catalog("M11", &g) != CYCLELAB_STATUS_OK) return 1;
  char *s = NULL;
  cyclelab_group_census(g, &s);
  printf("%s\n", s);
  cyclelab_string_free(s);
  cyclelab_group_free(g);
  return 0;
}
