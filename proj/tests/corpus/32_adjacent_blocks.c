#ifdef CONFIG_A
int a;
#endif
#ifdef CONFIG_A
int a_again;
#endif
